// Seeded random-walker segmentation on the masked pixel lattice: Gaussian
// intensity weights on 4-neighbor edges, combinatorial Dirichlet problem with
// the seeds as boundary values, solved by Jacobi-preconditioned conjugate
// gradient on the reduced Laplacian system.

#pragma once

#include "hrs/seeds.hpp"
#include "hrs/types.hpp"

namespace hrs {

struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, double residual) : std::runtime_error(msg), residual(residual) {}
    double residual;
};

struct LatticeGraph {
    int width = 0;
    int height = 0;
    Grid<int> node_of_pixel;         // -1 outside the mask, else node index (row-major order)
    std::vector<PixelCoord> pixels;  // node -> pixel
    // Right/down edges per node; -1 when the neighbor is off-mask.
    std::vector<int> right;
    std::vector<int> down;
    std::vector<double> w_right;
    std::vector<double> w_down;
    std::vector<SeedLabel> seed;     // Foreground / Background / Unseeded per node

    std::size_t node_count() const { return pixels.size(); }
};

struct ProbabilityField {
    std::vector<double> prob;  // per node, in [0,1]; 1 on fg seeds, 0 on bg seeds
    long iterations = 0;       // CG iterations spent
    double residual = 0.0;     // final relative residual
    std::size_t unseeded_count = 0;
    int seedless_components = 0;  // components with no seeds at all (assigned background)
};

// w = exp(-beta * (g_i - g_j)^2), floored at 1e-6; g comes from the rescaled
// [-1,1] image.
LatticeGraph build_graph(const Image& rescaled, const SeedMap& seedmap, double beta);

// Components holding both seed classes are solved; single-class components
// take that class's constant; seedless components get 0. max_iter <= 0 means
// 10 * unseeded nodes. Throws SolverError when CG fails to reach tolerance.
ProbabilityField solve(const LatticeGraph& graph, double tolerance, long max_iter);

// prob >= 0.5 -> foreground (ties to foreground), mapped back to the frame.
RegionMask threshold_labels(const LatticeGraph& graph, const ProbabilityField& field);

}  // namespace hrs
