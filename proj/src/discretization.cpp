#include "pwdens/discretization.hpp"

#include "pwdens/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace pwdens {

// ---------------------------------------------------------------- Mesh

int Mesh::cell_of(double x) const
{
    int j = static_cast<int>((x - lo) / h());
    return std::clamp(j, 0, m - 1);
}

std::vector<double> Mesh::nodes() const
{
    std::vector<double> out(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        out[static_cast<size_t>(i)] = node(i);
    return out;
}

// ------------------------------------------------------------- HatBasis

double HatBasis::eval(int i, double x) const
{
    double h = mesh.h();
    double ci = mesh.node(i);
    double t = 1.0 - std::fabs(x - ci) / h;
    if (t <= 0.0)
        return 0.0;
    if ((i == 0 && x < ci) || (i == mesh.m && x > ci))
        return 0.0;
    return t;
}

double HatBasis::integral(int i) const
{
    double h = mesh.h();
    return (i == 0 || i == mesh.m) ? 0.5 * h : h;
}

namespace {

// integral over [a,b] of the linear function equal to v0 at p and v1 at q,
// clipped to [p,q]; exact trapezoid
inline double linear_piece_integral(double p, double q, double v0, double v1,
                                    double a, double b)
{
    double lo = std::max(a, p), hi = std::min(b, q);
    if (hi <= lo)
        return 0.0;
    double w = q - p;
    double flo = v0 + (v1 - v0) * (lo - p) / w;
    double fhi = v0 + (v1 - v0) * (hi - p) / w;
    return 0.5 * (flo + fhi) * (hi - lo);
}

} // namespace

double HatBasis::integral_over(int i, double a, double b) const
{
    if (b <= a)
        return 0.0;
    double h = mesh.h();
    double ci = mesh.node(i);
    double acc = 0.0;
    if (i > 0)
        acc += linear_piece_integral(ci - h, ci, 0.0, 1.0, a, b);
    if (i < mesh.m)
        acc += linear_piece_integral(ci, ci + h, 1.0, 0.0, a, b);
    return acc;
}

// --------------------------------------------------------- NodalDensity

double NodalDensity::eval(double x) const
{
    if (x < mesh.lo - 1e-12 || x > mesh.hi + 1e-12)
        throw std::domain_error("NodalDensity::eval: x outside Delta");
    int j = mesh.cell_of(x);
    double a = mesh.node(j);
    double t = (x - a) / mesh.h();
    t = std::clamp(t, 0.0, 1.0);
    return values[static_cast<size_t>(j)] * (1.0 - t) +
           values[static_cast<size_t>(j) + 1] * t;
}

double NodalDensity::integral_lhat() const
{
    size_t n = values.size();
    double s = kernels::sum(values.data(), n);
    s -= 0.5 * (values.front() + values.back());
    return s * mesh.h() / mesh.len();
}

void NodalDensity::normalize_lhat()
{
    double s = integral_lhat();
    if (!(s > 0.0))
        throw std::runtime_error("NodalDensity: non-positive mass");
    kernels::scale(values.data(), 1.0 / s, values.size());
}

NodalDensity apply_Qm(const HatBasis& basis, std::span<const double> cell_averages)
{
    int m = basis.mesh.m;
    if (static_cast<int>(cell_averages.size()) != m)
        throw std::invalid_argument("apply_Qm: need exactly m cell averages");
    NodalDensity d;
    d.mesh = basis.mesh;
    d.values.resize(static_cast<size_t>(m) + 1);
    d.values[0] = cell_averages[0];
    for (int i = 1; i < m; ++i)
        d.values[static_cast<size_t>(i)] =
            0.5 * (cell_averages[static_cast<size_t>(i) - 1] +
                   cell_averages[static_cast<size_t>(i)]);
    d.values[static_cast<size_t>(m)] = cell_averages[static_cast<size_t>(m) - 1];
    return d;
}

// ------------------------------------------------------ StochasticMatrix

void StochasticMatrix::left_apply(const double* x, double* y) const
{
    std::memset(y, 0, sizeof(double) * static_cast<size_t>(n));
    if (dense) {
        for (int i = 0; i < n; ++i)
            kernels::axpy(x[i], dense_rows.data() + static_cast<size_t>(i) * n,
                          y, static_cast<size_t>(n));
    } else {
        for (int i = 0; i < n; ++i) {
            double xi = x[i];
            if (xi == 0.0)
                continue;
            for (std::int64_t k = row_ptr[static_cast<size_t>(i)];
                 k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
                y[col[static_cast<size_t>(k)]] += xi * val[static_cast<size_t>(k)];
        }
    }
}

double StochasticMatrix::entry(int i, int j) const
{
    if (dense)
        return dense_rows[static_cast<size_t>(i) * n + j];
    for (std::int64_t k = row_ptr[static_cast<size_t>(i)];
         k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
        if (col[static_cast<size_t>(k)] == j)
            return val[static_cast<size_t>(k)];
    return 0.0;
}

std::int64_t StochasticMatrix::nnz() const
{
    if (dense)
        return static_cast<std::int64_t>(n) * n;
    return static_cast<std::int64_t>(val.size());
}

// --------------------------------------------------------------- assemble

namespace {

struct RowCompressed {
    std::vector<std::int32_t> cols;
    std::vector<double> vals;
};

// rows i with supp(psi_i) = [c_{i-1}, c_{i+1}] intersecting (a, b)
inline void row_range(const Mesh& mesh, double a, double b, int& ilo, int& ihi)
{
    double h = mesh.h();
    ilo = static_cast<int>(std::floor((a - mesh.lo) / h));
    ihi = static_cast<int>(std::ceil((b - mesh.lo) / h));
    ilo = std::clamp(ilo, 0, mesh.m);
    ihi = std::clamp(ihi, 0, mesh.m);
}

} // namespace

StochasticMatrix assemble(BranchSet& map, const Mesh& mesh,
                          const AssembleOptions& opts)
{
    const int m = mesh.m;
    const int n = m + 1;
    if (m < 1)
        throw std::invalid_argument("assemble: mesh must have at least 1 cell");
    if (std::fabs(map.domain_lo() - mesh.lo) > 1e-12 ||
        std::fabs(map.domain_hi() - mesh.hi) > 1e-12)
        throw std::invalid_argument("assemble: mesh does not cover the map domain");

    double tlo, thi;
    map.tail_interval(tlo, thi);
    const double tail_len = std::max(0.0, thi - tlo);
    if (tail_len / mesh.len() > opts.tail_tol)
        throw std::runtime_error(
            "assemble: uncovered branch mass exceeds tail_tol");
    if (tail_len >= mesh.h())
        throw std::runtime_error(
            "assemble: uncovered tail wider than a mesh cell");

    const int B = map.count();
    HatBasis basis{mesh};

    // Last branch whose domain touches each row's support.  Padded outward
    // so root-solve jitter in the swept endpoints can never flush a row
    // while a materially overlapping branch is still pending.
    const double pad = std::max(1e-9 * mesh.h(), 1e-13);
    std::vector<int> last_touch(static_cast<size_t>(n), 0);
    for (int b = 1; b <= B; ++b) {
        double a, bb;
        map.branch_domain(b, a, bb);
        int ilo, ihi;
        row_range(mesh, a - pad, bb + pad, ilo, ihi);
        for (int i = ilo; i <= ihi; ++i)
            last_touch[static_cast<size_t>(i)] = std::max(
                last_touch[static_cast<size_t>(i)], b);
    }

    StochasticMatrix P;
    P.n = n;
    P.mesh = mesh;
    P.dense = (m <= opts.dense_cutoff);
    P.raw_row_sum.assign(static_cast<size_t>(n), 0.0);
    P.tail_row_mass.assign(static_cast<size_t>(n), 0.0);
    P.header.m = m;
    P.header.branch_count = B;
    P.header.tail_tol = opts.tail_tol;
    P.header.map_hash = map.map_hash();

    if (P.dense)
        P.dense_rows.assign(static_cast<size_t>(n) * n, 0.0);

    // sparse mode: per-row dense scratch, flushed after its last branch
    std::unordered_map<int, std::vector<double>> scratch;
    std::vector<RowCompressed> compressed(P.dense ? 0 : static_cast<size_t>(n));

    auto row_ptr_of = [&](int i) -> double* {
        if (P.dense)
            return P.dense_rows.data() + static_cast<size_t>(i) * n;
        auto it = scratch.find(i);
        if (it == scratch.end())
            it = scratch.emplace(i, std::vector<double>(static_cast<size_t>(n), 0.0)).first;
        return it->second.data();
    };

    auto finish_row = [&](int i) {
        if (P.raw_row_sum[static_cast<size_t>(i)] != 0.0)
            return; // already renormalized
        double* row = row_ptr_of(i);
        double raw = kernels::sum(row, static_cast<size_t>(n));
        // mass sent into dropped branches, exact: they tile the tail interval
        double deficit = tail_len > 0.0
            ? basis.integral_over(i, tlo, thi) / basis.integral(i)
            : 0.0;
        P.raw_row_sum[static_cast<size_t>(i)] = raw;
        P.tail_row_mass[static_cast<size_t>(i)] = deficit;
        if (!(raw > 0.0))
            throw std::runtime_error("assemble: empty row (tail too wide)");
        kernels::scale(row, 1.0 / raw, static_cast<size_t>(n));
        if (!P.dense) {
            RowCompressed rc;
            for (int j = 0; j < n; ++j)
                if (row[j] != 0.0) {
                    rc.cols.push_back(j);
                    rc.vals.push_back(row[j]);
                }
            compressed[static_cast<size_t>(i)] = std::move(rc);
            scratch.erase(i);
        }
    };

    const std::vector<double> nodes = mesh.nodes();
    std::vector<double> u;
    map.reset();
    for (int b = 1; b <= B; ++b) {
        map.edge_preimages(b, nodes, u);
        const bool inc = u.front() <= u.back();
        double blo = inc ? u.front() : u.back();
        double bhi = inc ? u.back() : u.front();
        int ilo, ihi;
        row_range(mesh, blo, bhi, ilo, ihi);
        for (int i = ilo; i <= ihi; ++i) {
            if (P.raw_row_sum[static_cast<size_t>(i)] != 0.0)
                continue; // finished row; any residue here is a root-tol sliver
            double slo = mesh.node(std::max(i - 1, 0));
            double shi = mesh.node(std::min(i + 1, m));
            // cells j (1-based) whose branch preimage meets [slo, shi];
            // equality boundaries are measure-zero and clip to 0 anyway
            int jlo, jhi;
            if (inc) {
                // need u_j > slo and u_{j-1} < shi
                jlo = static_cast<int>(std::upper_bound(u.begin(), u.end(), slo) - u.begin());
                jhi = static_cast<int>(std::lower_bound(u.begin(), u.end(), shi) - u.begin());
            } else {
                // u descending: need u_j < shi and u_{j-1} > slo
                jlo = static_cast<int>(std::lower_bound(u.begin(), u.end(), shi,
                                                        std::greater<double>()) - u.begin());
                jhi = static_cast<int>(std::upper_bound(u.begin(), u.end(), slo,
                                                        std::greater<double>()) - u.begin());
            }
            jlo = std::max(jlo, 1);
            jhi = std::min(jhi, m);
            if (jlo > jhi)
                continue;
            double* row = row_ptr_of(i);
            const double inv_wi = 1.0 / basis.integral(i);
            for (int j = jlo; j <= jhi; ++j) {
                double pa = u[static_cast<size_t>(j) - 1];
                double pb = u[static_cast<size_t>(j)];
                if (pa > pb)
                    std::swap(pa, pb);
                double c = basis.integral_over(i, pa, pb) * inv_wi;
                if (c != 0.0) {
                    // Q_m stencil: cell j feeds nodes j-1 and j, half each
                    row[j - 1] += 0.5 * c;
                    row[j] += 0.5 * c;
                }
            }
        }
        // flush rows that no later branch can touch
        for (int i = ilo; i <= ihi; ++i)
            if (last_touch[static_cast<size_t>(i)] == b)
                finish_row(i);
    }

    // rows never flushed above (padded last_touch can point past the sweep)
    if (!P.dense) {
        for (int i = 0; i < n; ++i)
            finish_row(i);
        P.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i)
            P.row_ptr[static_cast<size_t>(i) + 1] =
                P.row_ptr[static_cast<size_t>(i)] +
                static_cast<std::int64_t>(compressed[static_cast<size_t>(i)].cols.size());
        P.col.reserve(static_cast<size_t>(P.row_ptr.back()));
        P.val.reserve(static_cast<size_t>(P.row_ptr.back()));
        for (auto& rc : compressed) {
            P.col.insert(P.col.end(), rc.cols.begin(), rc.cols.end());
            P.val.insert(P.val.end(), rc.vals.begin(), rc.vals.end());
        }
    } else {
        for (int i = 0; i < n; ++i)
            finish_row(i);
    }

    return P;
}

// ------------------------------------------------------ InducedBranchSet

InducedBranchSet::InducedBranchSet(const InducedMap& ind, double root_tol)
    : ind_(&ind), root_tol_(root_tol)
{
}

int InducedBranchSet::count() const { return ind_->branch_count(); }
double InducedBranchSet::domain_lo() const { return ind_->delta_lo(); }
double InducedBranchSet::domain_hi() const { return ind_->delta_hi(); }

void InducedBranchSet::branch_domain(int b, double& a, double& bnd) const
{
    const InducedBranch& br = ind_->branches[static_cast<size_t>(b) - 1];
    a = br.a;
    bnd = br.b;
}

void InducedBranchSet::edge_preimages(int b, const std::vector<double>& nodes,
                                      std::vector<double>& out)
{
    if (b != cursor_ + 1)
        throw std::logic_error("InducedBranchSet: branches must be swept in order");
    if (b == 1)
        sweep_.emplace(ind_->spec, nodes, root_tol_);
    sweep_->advance();
    cursor_ = b;
    out = sweep_->pullback();
}

void InducedBranchSet::reset()
{
    cursor_ = 0;
    sweep_.reset();
}

void InducedBranchSet::tail_interval(double& lo, double& hi) const
{
    lo = ind_->tail_lo;
    hi = ind_->tail_hi;
}

std::uint64_t InducedBranchSet::map_hash() const
{
    return map_spec_hash(ind_->spec);
}

// ------------------------------------------------------------------ hash

std::uint64_t map_spec_hash(const MapSpec& spec)
{
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v;
        return h * 1099511628211ULL; // FNV-1a step
    };
    std::uint64_t h = 14695981039346656037ULL;
    for (char ch : spec.family)
        h = mix(h, static_cast<unsigned char>(ch));
    auto bits = [](double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, sizeof d);
        return u;
    };
    h = mix(h, bits(spec.alpha));
    h = mix(h, bits(spec.x0));
    h = mix(h, bits(spec.beta));
    return h;
}

} // namespace pwdens
