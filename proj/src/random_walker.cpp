#include "hrs/random_walker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hrs {

namespace {

constexpr double kWeightFloor = 1e-6;

// CSR-like adjacency restricted to the unseeded unknowns: for unknown i,
// L x = b with L = D - W over unknown-unknown edges and
// b_i = sum of weights to adjacent foreground seeds.
struct ReducedSystem {
    std::vector<double> diag;            // full degree (all incident edges)
    std::vector<int> row_start;
    std::vector<int> col;                // neighboring unknown index
    std::vector<double> w;               // edge weight
    std::vector<double> b;

    std::size_t n() const { return diag.size(); }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::size_t i = 0; i < n(); ++i) {
            double acc = diag[i] * x[i];
            for (int k = row_start[i]; k < row_start[i + 1]; ++k) acc -= w[k] * x[col[k]];
            y[i] = acc;
        }
    }
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

LatticeGraph build_graph(const Image& rescaled, const SeedMap& seedmap, double beta) {
    if (!(beta > 0.0)) throw ValidationError("walker beta must be positive");
    if (!rescaled.same_dims(seedmap.labels)) throw ValidationError("rescaled/labels dimension mismatch");

    LatticeGraph g;
    g.width = rescaled.width;
    g.height = rescaled.height;
    g.node_of_pixel = Grid<int>(rescaled.height, rescaled.width, -1);

    for (int r = 0; r < rescaled.height; ++r)
        for (int c = 0; c < rescaled.width; ++c)
            if (seedmap.labels.at(r, c) != SeedLabel::OutsideMask) {
                g.node_of_pixel.at(r, c) = static_cast<int>(g.pixels.size());
                g.pixels.push_back({r, c});
            }

    const std::size_t n = g.pixels.size();
    g.right.assign(n, -1);
    g.down.assign(n, -1);
    g.w_right.assign(n, 0.0);
    g.w_down.assign(n, 0.0);
    g.seed.resize(n);

    auto weight = [&](int r1, int c1, int r2, int c2) {
        const double d = rescaled.at(r1, c1) - rescaled.at(r2, c2);
        return std::max(std::exp(-beta * d * d), kWeightFloor);
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto [r, c] = g.pixels[i];
        g.seed[i] = seedmap.labels.at(r, c);
        if (c + 1 < g.width && g.node_of_pixel.at(r, c + 1) >= 0) {
            g.right[i] = g.node_of_pixel.at(r, c + 1);
            g.w_right[i] = weight(r, c, r, c + 1);
        }
        if (r + 1 < g.height && g.node_of_pixel.at(r + 1, c) >= 0) {
            g.down[i] = g.node_of_pixel.at(r + 1, c);
            g.w_down[i] = weight(r, c, r + 1, c);
        }
    }
    return g;
}

ProbabilityField solve(const LatticeGraph& graph, double tolerance, long max_iter) {
    const std::size_t n = graph.node_count();
    ProbabilityField field;
    field.prob.assign(n, 0.0);
    if (n == 0) return field;

    // Connected components over the 4-lattice, with per-component seed census.
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    {
        std::vector<int> stack;
        for (std::size_t s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            comp[s] = ncomp;
            stack.push_back(static_cast<int>(s));
            while (!stack.empty()) {
                const int i = stack.back();
                stack.pop_back();
                const int nb[2] = {graph.right[i], graph.down[i]};
                for (int j : nb)
                    if (j >= 0 && comp[j] < 0) { comp[j] = ncomp; stack.push_back(j); }
                // Up/left neighbors reached through their right/down entries.
                const auto [r, c] = graph.pixels[i];
                if (c > 0) {
                    const int j = graph.node_of_pixel.at(r, c - 1);
                    if (j >= 0 && comp[j] < 0) { comp[j] = ncomp; stack.push_back(j); }
                }
                if (r > 0) {
                    const int j = graph.node_of_pixel.at(r - 1, c);
                    if (j >= 0 && comp[j] < 0) { comp[j] = ncomp; stack.push_back(j); }
                }
            }
            ++ncomp;
        }
    }

    std::vector<std::uint8_t> has_fg(ncomp, 0), has_bg(ncomp, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (graph.seed[i] == SeedLabel::Foreground) has_fg[comp[i]] = 1;
        if (graph.seed[i] == SeedLabel::Background) has_bg[comp[i]] = 1;
    }
    for (int k = 0; k < ncomp; ++k)
        if (!has_fg[k] && !has_bg[k]) ++field.seedless_components;

    // Seeds and single-class components are fixed directly; mixed-component
    // unseeded nodes become unknowns.
    std::vector<int> unknown_of_node(n, -1);
    std::vector<int> unknowns;
    for (std::size_t i = 0; i < n; ++i) {
        if (graph.seed[i] == SeedLabel::Foreground) {
            field.prob[i] = 1.0;
        } else if (graph.seed[i] == SeedLabel::Background) {
            field.prob[i] = 0.0;
        } else if (has_fg[comp[i]] && has_bg[comp[i]]) {
            unknown_of_node[i] = static_cast<int>(unknowns.size());
            unknowns.push_back(static_cast<int>(i));
        } else {
            field.prob[i] = has_fg[comp[i]] ? 1.0 : 0.0;
        }
    }
    field.unseeded_count = unknowns.size();
    if (unknowns.empty()) return field;

    ReducedSystem sys;
    const std::size_t m = unknowns.size();
    sys.diag.assign(m, 0.0);
    sys.b.assign(m, 0.0);
    sys.row_start.assign(m + 1, 0);

    auto visit_edges = [&](auto&& fn) {
        for (std::size_t i = 0; i < n; ++i) {
            if (graph.right[i] >= 0) fn(static_cast<int>(i), graph.right[i], graph.w_right[i]);
            if (graph.down[i] >= 0) fn(static_cast<int>(i), graph.down[i], graph.w_down[i]);
        }
    };

    // A non-unknown neighbor of an unknown is necessarily a seed of the same
    // mixed component; foreground seeds contribute their weight to the rhs.
    visit_edges([&](int a, int b, double w) {
        const int ua = unknown_of_node[a];
        const int ub = unknown_of_node[b];
        if (ua >= 0) {
            sys.diag[ua] += w;
            if (ub >= 0) ++sys.row_start[ua + 1];
            else if (graph.seed[b] == SeedLabel::Foreground) sys.b[ua] += w;
        }
        if (ub >= 0) {
            sys.diag[ub] += w;
            if (ua >= 0) ++sys.row_start[ub + 1];
            else if (graph.seed[a] == SeedLabel::Foreground) sys.b[ub] += w;
        }
    });

    for (std::size_t i = 0; i < m; ++i) sys.row_start[i + 1] += sys.row_start[i];
    sys.col.assign(sys.row_start[m], 0);
    sys.w.assign(sys.row_start[m], 0.0);
    {
        std::vector<int> cursor(sys.row_start.begin(), sys.row_start.end() - 1);
        visit_edges([&](int a, int b, double w) {
            const int ua = unknown_of_node[a];
            const int ub = unknown_of_node[b];
            if (ua >= 0 && ub >= 0) {
                sys.col[cursor[ua]] = ub;
                sys.w[cursor[ua]++] = w;
                sys.col[cursor[ub]] = ua;
                sys.w[cursor[ub]++] = w;
            }
        });
    }

    // Jacobi-preconditioned CG, x0 = 0, relative-residual stopping.
    const double bnorm = norm2(sys.b);
    std::vector<double> x(m, 0.0);
    if (bnorm > 0.0) {
        if (max_iter <= 0) max_iter = 10 * static_cast<long>(m);
        std::vector<double> r = sys.b, z(m), p(m), q(m);
        for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / sys.diag[i];
        p = z;
        double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        double rel = norm2(r) / bnorm;
        long it = 0;
        while (rel > tolerance && it < max_iter) {
            sys.apply(p, q);
            const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
            const double alpha = rz / pq;
            for (std::size_t i = 0; i < m; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / sys.diag[i];
            const double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
            rel = norm2(r) / bnorm;
            ++it;
        }
        field.iterations = it;
        field.residual = rel;
        if (rel > tolerance)
            throw SolverError("random walker CG did not converge within " + std::to_string(max_iter) +
                                  " iterations (relative residual " + std::to_string(rel) + ")",
                              rel);
    }

    for (std::size_t k = 0; k < m; ++k)
        field.prob[unknowns[k]] = std::clamp(x[k], 0.0, 1.0);
    return field;
}

RegionMask threshold_labels(const LatticeGraph& graph, const ProbabilityField& field) {
    RegionMask out(graph.height, graph.width, 0);
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        if (field.prob[i] >= 0.5) {
            const auto [r, c] = graph.pixels[i];
            out.at(r, c) = 1;
        }
    return out;
}

}  // namespace hrs
