#include "pwdens/matrix_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pwdens {

namespace {

constexpr char MAGIC[4] = {'P', 'W', 'D', 'M'};
constexpr std::uint32_t VERSION = 1;

template <class T>
void put(std::ostream& os, const T& v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v)
{
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return static_cast<bool>(is);
}

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

void save_matrix(const StochasticMatrix& P, const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("save_matrix: cannot open " + path);
    os.write(MAGIC, 4);
    put(os, VERSION);
    put(os, P.header.map_hash);
    put(os, P.header.alpha);
    put(os, P.header.x0);
    put(os, P.header.tail_tol);
    put(os, static_cast<std::int32_t>(P.header.m));
    put(os, static_cast<std::int32_t>(P.header.branch_count));
    put(os, P.mesh.lo);
    put(os, P.mesh.hi);
    put(os, static_cast<std::uint8_t>(P.dense ? 1 : 0));
    const std::size_t n = static_cast<std::size_t>(P.n);
    if (P.dense) {
        os.write(reinterpret_cast<const char*>(P.dense_rows.data()),
                 static_cast<std::streamsize>(sizeof(double) * n * n));
    } else {
        os.write(reinterpret_cast<const char*>(P.row_ptr.data()),
                 static_cast<std::streamsize>(sizeof(std::int64_t) * (n + 1)));
        std::int64_t nnz = P.row_ptr.back();
        os.write(reinterpret_cast<const char*>(P.col.data()),
                 static_cast<std::streamsize>(sizeof(std::int32_t) *
                                              static_cast<std::size_t>(nnz)));
        os.write(reinterpret_cast<const char*>(P.val.data()),
                 static_cast<std::streamsize>(sizeof(double) *
                                              static_cast<std::size_t>(nnz)));
    }
    os.write(reinterpret_cast<const char*>(P.raw_row_sum.data()),
             static_cast<std::streamsize>(sizeof(double) * n));
    os.write(reinterpret_cast<const char*>(P.tail_row_mass.data()),
             static_cast<std::streamsize>(sizeof(double) * n));
    if (!os)
        throw std::runtime_error("save_matrix: short write to " + path);
}

std::optional<StochasticMatrix> load_matrix(const std::string& path,
                                            const MatrixHeader& expect)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return std::nullopt;
    char magic[4];
    is.read(magic, 4);
    std::uint32_t version = 0;
    if (!is || std::memcmp(magic, MAGIC, 4) != 0 || !get(is, version) ||
        version != VERSION)
        return std::nullopt;

    StochasticMatrix P;
    std::int32_t m = 0, B = 0;
    std::uint8_t dense = 0;
    if (!get(is, P.header.map_hash) || !get(is, P.header.alpha) ||
        !get(is, P.header.x0) || !get(is, P.header.tail_tol) ||
        !get(is, m) || !get(is, B) || !get(is, P.mesh.lo) ||
        !get(is, P.mesh.hi) || !get(is, dense))
        return std::nullopt;
    P.header.m = m;
    P.header.branch_count = B;

    // bit-exact header match or the cache entry is ignored
    if (P.header.map_hash != expect.map_hash || m != expect.m ||
        B != expect.branch_count || !same_bits(P.header.alpha, expect.alpha) ||
        !same_bits(P.header.x0, expect.x0) ||
        !same_bits(P.header.tail_tol, expect.tail_tol))
        return std::nullopt;

    P.mesh.m = m;
    P.n = m + 1;
    P.dense = dense != 0;
    const std::size_t n = static_cast<std::size_t>(P.n);
    auto read_doubles = [&](std::vector<double>& v, std::size_t count) {
        v.resize(count);
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(sizeof(double) * count));
        return static_cast<bool>(is);
    };
    if (P.dense) {
        if (!read_doubles(P.dense_rows, n * n))
            return std::nullopt;
    } else {
        P.row_ptr.resize(n + 1);
        is.read(reinterpret_cast<char*>(P.row_ptr.data()),
                static_cast<std::streamsize>(sizeof(std::int64_t) * (n + 1)));
        if (!is)
            return std::nullopt;
        std::size_t nnz = static_cast<std::size_t>(P.row_ptr.back());
        P.col.resize(nnz);
        is.read(reinterpret_cast<char*>(P.col.data()),
                static_cast<std::streamsize>(sizeof(std::int32_t) * nnz));
        std::vector<double> vals;
        if (!is || !read_doubles(vals, nnz))
            return std::nullopt;
        P.val = std::move(vals);
    }
    if (!read_doubles(P.raw_row_sum, n) || !read_doubles(P.tail_row_mass, n))
        return std::nullopt;
    return P;
}

std::string cache_path_for(const MatrixHeader& h)
{
    const char* dir = std::getenv("PWDENS_CACHE_DIR");
    if (!dir || !*dir)
        return {};
    auto bits = [](double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, sizeof d);
        return u;
    };
    std::uint64_t key = h.map_hash;
    key = key * 1099511628211ULL ^ bits(h.alpha);
    key = key * 1099511628211ULL ^ bits(h.tail_tol);
    key = key * 1099511628211ULL ^ static_cast<std::uint64_t>(h.m);
    key = key * 1099511628211ULL ^ static_cast<std::uint64_t>(h.branch_count);
    std::ostringstream ss;
    ss << dir << "/" << std::hex << key << ".pwdm";
    return ss.str();
}

} // namespace pwdens
