#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "billiard/geometry.hpp"
#include "billiard/swf.hpp"

namespace billiard {

// Node lattice x0 + i h, y0 + j h with one padding node on every side.
struct GridMask {
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> inside;  // per node, row-major iy * nx + ix
    std::vector<int> index;            // unknown number of an inside node, -1 otherwise
    int unknowns = 0;

    Vec2 node(int ix, int iy) const { return {x0 + ix * h, y0 + iy * h}; }
};

// Throws GridTooCoarse when h exceeds 1/4 of the shortest side.
GridMask rasterize(const Polygon& poly, double h);

// Compressed rows of the 5-point discretization of -1/2 Laplacian.
struct SparseSymmetric {
    int dimension = 0;
    std::vector<int> row_start;
    std::vector<int> column;
    std::vector<double> value;

    void multiply(std::span<const double> x, std::span<double> y) const;
    double at(int row, int col) const;
};

SparseSymmetric assemble(const GridMask& mask);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  // sum v^2 h^2 = 1
    double residual = 0.0;       // |A x - E x| for the unit 2-norm vector x
};

struct SolverOptions {
    double tol = 1e-10;  // residual relative to E
    std::uint64_t seed = 20240531;
    int block = 6;
    int max_iterations = 10000;
};

// k lowest eigenpairs in ascending order. `h` sets the discrete normalization.
std::vector<EigenPair> lowest_eigenpairs(const SparseSymmetric& A, int k, double h, const SolverOptions& opt = {});

struct MatchedPair {
    int semiclassical = -1;
    int numeric = -1;
    double rel_error = 0.0;
};

struct MatchReport {
    std::vector<MatchedPair> matched;  // sorted by semiclassical index
    std::vector<int> unmatched_semiclassical;
    std::vector<int> unmatched_numeric;
};

// Greedy: candidate pairs within tol_rel are taken in order of increasing relative error.
MatchReport spectrum_match(std::span<const SpectrumEntry> semiclassical, std::span<const EigenPair> numeric, double tol_rel);

// Samples a generator on the inside nodes; cell centers of the returned grid are the nodes.
Wavefield field_on_mask(const FieldGenerator& gen, const GridMask& mask);

struct OverlapReport {
    std::vector<double> overlap;          // |<v_j, psi>|^2 per mode
    std::vector<double> cluster_overlap;  // summed over numerically degenerate clusters, per mode
    double total = 0.0;
    int participation = 0;  // smallest number of modes reaching 0.9, or all modes if never
    bool reached = false;
    int dominant = -1;
};

// Throws GridMismatch when the field was not sampled on the mask nodes.
OverlapReport scar_overlap(const Wavefield& field, const GridMask& mask, std::span<const EigenPair> pairs);

}  // namespace billiard
