#include "billiard/refsolver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <random>

#include "billiard/error.hpp"
#include "billiard/parallel.hpp"

namespace billiard {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Sparse = Eigen::SparseMatrix<double>;

Sparse to_eigen(const SparseSymmetric& A)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A.value.size());
    for (int r = 0; r < A.dimension; ++r)
        for (int j = A.row_start[r]; j < A.row_start[r + 1]; ++j) t.emplace_back(r, A.column[j], A.value[j]);
    Sparse S(A.dimension, A.dimension);
    S.setFromTriplets(t.begin(), t.end());
    return S;
}

EigenPair make_pair(const Sparse& S, double theta, Vec x, double h)
{
    x.normalize();
    Eigen::Index at = 0;
    x.cwiseAbs().maxCoeff(&at);
    if (x[at] < 0) x = -x;
    EigenPair p;
    p.value = theta;
    p.residual = (S * x - theta * x).norm();
    p.vector.resize(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) p.vector[static_cast<std::size_t>(i)] = x[i] / h;
    return p;
}

std::vector<EigenPair> dense_pairs(const Sparse& S, int k, double h)
{
    const Mat D = Mat(S);
    Eigen::SelfAdjointEigenSolver<Mat> es(D);
    if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "dense eigensolver failed");
    std::vector<EigenPair> out;
    for (int i = 0; i < k; ++i) out.push_back(make_pair(S, es.eigenvalues()[i], es.eigenvectors().col(i), h));
    return out;
}

// Orthonormalizes the columns of W against the first m columns of Q and each other,
// appending the survivors to Q. Returns the number appended.
int append_block(Mat& Q, int m, Mat W)
{
    const auto base = Q.leftCols(m);
    for (int pass = 0; pass < 2; ++pass)
        if (m > 0) W -= base * (base.transpose() * W);
    int added = 0;
    for (Eigen::Index c = 0; c < W.cols() && m + added < Q.cols(); ++c) {
        Vec v = W.col(c);
        const double before = v.norm();
        if (before == 0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            const auto cur = Q.leftCols(m + added);
            v -= cur * (cur.transpose() * v);
        }
        const double after = v.norm();
        if (after < 1e-10 * before) continue;
        Q.col(m + added) = v / after;
        ++added;
    }
    return added;
}

}  // namespace

GridMask rasterize(const Polygon& poly, double h)
{
    double shortest = 1e300;
    for (const Side& s : poly.sides()) shortest = std::min(shortest, s.length);
    if (!(h > 0)) fail(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (h > shortest / 4.0 * (1 + 1e-12)) fail(ErrorCode::GridTooCoarse, "grid spacing exceeds 1/4 of the shortest side");
    const auto [lo, hi] = poly.bounding_box();
    GridMask m;
    m.h = h;
    m.x0 = lo.x - h;
    m.y0 = lo.y - h;
    m.nx = static_cast<int>(std::ceil((hi.x - lo.x) / h - 1e-9)) + 3;
    m.ny = static_cast<int>(std::ceil((hi.y - lo.y) / h - 1e-9)) + 3;
    const auto total = static_cast<std::size_t>(m.nx) * static_cast<std::size_t>(m.ny);
    m.inside.assign(total, 0);
    m.index.assign(total, -1);
    const double tol = 1e-9 * h;
    parallel_for(static_cast<std::size_t>(m.ny), [&](std::size_t iy) {
        for (int ix = 1; ix + 1 < m.nx; ++ix) {
            const Vec2 p = m.node(ix, static_cast<int>(iy));
            if (iy == 0 || static_cast<int>(iy) + 1 == m.ny) continue;
            if (poly.contains(p) && poly.distance_to_boundary(p) > tol)
                m.inside[iy * static_cast<std::size_t>(m.nx) + static_cast<std::size_t>(ix)] = 1;
        }
    });
    for (std::size_t i = 0; i < total; ++i)
        if (m.inside[i]) m.index[i] = m.unknowns++;
    return m;
}

SparseSymmetric assemble(const GridMask& mask)
{
    SparseSymmetric A;
    A.dimension = mask.unknowns;
    A.row_start.reserve(static_cast<std::size_t>(mask.unknowns) + 1);
    A.row_start.push_back(0);
    const double diag = 2.0 / (mask.h * mask.h);
    const double off = -0.5 / (mask.h * mask.h);
    for (int iy = 0; iy < mask.ny; ++iy) {
        for (int ix = 0; ix < mask.nx; ++ix) {
            const int row = mask.index[static_cast<std::size_t>(iy) * mask.nx + ix];
            if (row < 0) continue;
            // neighbours in increasing unknown order: below, left, self, right, above
            const int nb[5] = {mask.index[static_cast<std::size_t>(iy - 1) * mask.nx + ix],
                               mask.index[static_cast<std::size_t>(iy) * mask.nx + ix - 1], row,
                               mask.index[static_cast<std::size_t>(iy) * mask.nx + ix + 1],
                               mask.index[static_cast<std::size_t>(iy + 1) * mask.nx + ix]};
            for (int j = 0; j < 5; ++j) {
                if (nb[j] < 0) continue;
                A.column.push_back(nb[j]);
                A.value.push_back(j == 2 ? diag : off);
            }
            A.row_start.push_back(static_cast<int>(A.column.size()));
        }
    }
    return A;
}

void SparseSymmetric::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != static_cast<std::size_t>(dimension) || y.size() != x.size())
        fail(ErrorCode::InvalidArgument, "vector size does not match the matrix");
    parallel_for(static_cast<std::size_t>(dimension), [&](std::size_t r) {
        double s = 0.0;
        for (int j = row_start[r]; j < row_start[r + 1]; ++j) s += value[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(column[static_cast<std::size_t>(j)])];
        y[r] = s;
    });
}

double SparseSymmetric::at(int row, int col) const
{
    for (int j = row_start[static_cast<std::size_t>(row)]; j < row_start[static_cast<std::size_t>(row) + 1]; ++j)
        if (column[static_cast<std::size_t>(j)] == col) return value[static_cast<std::size_t>(j)];
    return 0.0;
}

std::vector<EigenPair> lowest_eigenpairs(const SparseSymmetric& A, int k, double h, const SolverOptions& opt)
{
    const int n = A.dimension;
    if (k <= 0) return {};
    if (k > n) fail(ErrorCode::InvalidArgument, "more eigenpairs requested than unknowns");
    const Sparse S = to_eigen(A);
    if (n <= 400) return dense_pairs(S, k, h);

    Eigen::SimplicialLDLT<Sparse> ldlt(S);
    if (ldlt.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "factorization failed");

    const int b = std::clamp(std::max(opt.block, k / 5), 1, n);
    const int max_basis = std::min(n, std::max(3 * k + 2 * b, k + 40));
    const int keep = std::min(n, k + b);
    Mat Q(n, max_basis), AQ(n, max_basis), H(max_basis, max_basis);
    int m = 0;

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    Mat start(n, b);
    for (Eigen::Index c = 0; c < start.cols(); ++c)
        for (Eigen::Index r = 0; r < n; ++r) start(r, c) = normal(rng);
    Mat grow = ldlt.solve(start);

    double best = 1e300;
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (m + b > max_basis) {
            // thick restart on the lowest Ritz vectors
            Eigen::SelfAdjointEigenSolver<Mat> es(H.topLeftCorner(m, m));
            const Mat Y = es.eigenvectors().leftCols(keep);
            Q.leftCols(keep) = Q.leftCols(m) * Y;
            AQ.leftCols(keep) = AQ.leftCols(m) * Y;
            H.topLeftCorner(keep, keep) = es.eigenvalues().head(keep).asDiagonal();
            m = keep;
        }
        const int added = append_block(Q, m, grow);
        if (added == 0 && m < k) {
            for (Eigen::Index c = 0; c < grow.cols(); ++c)
                for (Eigen::Index r = 0; r < n; ++r) grow(r, c) = normal(rng);
            continue;
        }
        AQ.middleCols(m, added) = S * Q.middleCols(m, added);
        H.block(0, m, m + added, added) = Q.leftCols(m + added).transpose() * AQ.middleCols(m, added);
        H.block(m, 0, added, m) = H.block(0, m, m, added).transpose();
        m += added;
        H.topLeftCorner(m, m) = 0.5 * (H.topLeftCorner(m, m) + Mat(H.topLeftCorner(m, m).transpose()));
        if (m < k) {
            grow = ldlt.solve(Mat(Q.middleCols(m - added, added)));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(H.topLeftCorner(m, m));
        const Vec theta = es.eigenvalues();
        const Mat Y = es.eigenvectors().leftCols(k);
        const Mat X = Q.leftCols(m) * Y;
        const Mat R = AQ.leftCols(m) * Y - X * theta.head(k).asDiagonal();
        std::vector<int> open;
        double worst = 0.0;
        for (int i = 0; i < k; ++i) {
            const double rel = R.col(i).norm() / std::abs(theta[i]);
            worst = std::max(worst, rel);
            if (rel > opt.tol) open.push_back(i);
        }
        best = std::min(best, worst);
        if (open.empty()) {
            std::vector<EigenPair> out;
            out.reserve(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) out.push_back(make_pair(S, theta[i], X.col(i), h));
            return out;
        }
        const int take = std::min<int>(b, static_cast<int>(open.size()));
        Mat pick(n, take);
        for (int j = 0; j < take; ++j) pick.col(j) = X.col(open[static_cast<std::size_t>(j)]);
        grow = ldlt.solve(pick);
    }
    fail(ErrorCode::NoConvergence, "eigensolver did not converge, best relative residual " + std::to_string(best));
}

MatchReport spectrum_match(std::span<const SpectrumEntry> semiclassical, std::span<const EigenPair> numeric, double tol_rel)
{
    struct Candidate {
        double err;
        int s, n;
    };
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < semiclassical.size(); ++i)
        for (std::size_t j = 0; j < numeric.size(); ++j) {
            const double e = std::abs(numeric[j].value - semiclassical[i].E) / std::abs(semiclassical[i].E);
            if (e <= tol_rel) cand.push_back({e, static_cast<int>(i), static_cast<int>(j)});
        }
    std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.err < b.err; });
    std::vector<char> used_s(semiclassical.size(), 0), used_n(numeric.size(), 0);
    MatchReport r;
    for (const Candidate& c : cand) {
        if (used_s[static_cast<std::size_t>(c.s)] || used_n[static_cast<std::size_t>(c.n)]) continue;
        used_s[static_cast<std::size_t>(c.s)] = used_n[static_cast<std::size_t>(c.n)] = 1;
        r.matched.push_back({c.s, c.n, c.err});
    }
    std::sort(r.matched.begin(), r.matched.end(), [](const MatchedPair& a, const MatchedPair& b) { return a.semiclassical < b.semiclassical; });
    for (std::size_t i = 0; i < used_s.size(); ++i)
        if (!used_s[i]) r.unmatched_semiclassical.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < used_n.size(); ++j)
        if (!used_n[j]) r.unmatched_numeric.push_back(static_cast<int>(j));
    return r;
}

Wavefield field_on_mask(const FieldGenerator& gen, const GridMask& mask)
{
    Wavefield f;
    f.grid = {mask.x0 - 0.5 * mask.h, mask.y0 - 0.5 * mask.h, mask.h, mask.nx, mask.ny};
    f.values.assign(mask.inside.size(), Complex(0.0));
    f.mask = mask.inside;
    parallel_for(static_cast<std::size_t>(mask.ny), [&](std::size_t iy) {
        for (int ix = 0; ix < mask.nx; ++ix) {
            const std::size_t i = iy * static_cast<std::size_t>(mask.nx) + static_cast<std::size_t>(ix);
            if (mask.inside[i]) f.values[i] = gen.eval(mask.node(ix, static_cast<int>(iy)));
        }
    });
    if (gen.energy > 0) f.coarse = 2.0 * std::numbers::pi / std::sqrt(2.0 * gen.energy) / mask.h < 8.0;
    return f;
}

OverlapReport scar_overlap(const Wavefield& field, const GridMask& mask, std::span<const EigenPair> pairs)
{
    const double h = mask.h;
    const GridSpec& g = field.grid;
    if (g.nx != mask.nx || g.ny != mask.ny || std::abs(g.h - h) > 1e-12 * h || std::abs(g.x0 + 0.5 * h - mask.x0) > 1e-9 * h ||
        std::abs(g.y0 + 0.5 * h - mask.y0) > 1e-9 * h || field.values.size() != mask.inside.size())
        fail(ErrorCode::GridMismatch, "field was not sampled on the solver nodes");
    std::vector<Complex> psi(static_cast<std::size_t>(mask.unknowns));
    double norm2 = 0.0;
    for (std::size_t i = 0; i < mask.index.size(); ++i) {
        if (mask.index[i] < 0) continue;
        psi[static_cast<std::size_t>(mask.index[i])] = field.values[i];
        norm2 += std::norm(field.values[i]) * h * h;
    }
    OverlapReport r;
    r.overlap.assign(pairs.size(), 0.0);
    if (norm2 == 0.0) return r;
    const double scale = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (pairs[j].vector.size() != psi.size()) fail(ErrorCode::GridMismatch, "eigenvector size does not match the mask");
        Complex s = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) s += pairs[j].vector[i] * psi[i];
        r.overlap[j] = std::norm(s * h * h * scale);
        r.total += r.overlap[j];
    }
    r.cluster_overlap.assign(pairs.size(), 0.0);
    for (std::size_t j = 0; j < pairs.size();) {
        std::size_t e = j + 1;
        while (e < pairs.size() && std::abs(pairs[e].value - pairs[j].value) <= 1e-8 * std::abs(pairs[j].value)) ++e;
        const double sum = std::accumulate(r.overlap.begin() + static_cast<std::ptrdiff_t>(j), r.overlap.begin() + static_cast<std::ptrdiff_t>(e), 0.0);
        for (std::size_t i = j; i < e; ++i) r.cluster_overlap[i] = sum;
        j = e;
    }
    std::vector<double> sorted = r.overlap;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double acc = 0.0;
    r.participation = static_cast<int>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc += sorted[i];
        if (acc >= 0.9) {
            r.participation = static_cast<int>(i) + 1;
            r.reached = true;
            break;
        }
    }
    r.dominant = static_cast<int>(std::max_element(r.overlap.begin(), r.overlap.end()) - r.overlap.begin());
    return r;
}

}  // namespace billiard
