#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "torrec/recurrence.hpp"
#include "torrec/rng.hpp"

namespace torrec {

/// Nesting levels n_1 < n_2 < ... selected so that consecutive scales
/// separate (every parent can hold a child) and the partial-sum ratios
/// sum_{i<j} n_i / n_j stay below the configured threshold.
struct LevelSequence {
    std::vector<unsigned long> levels;
    std::vector<double> ratios;  // for j >= 2: (n_1 + ... + n_{j-1}) / n_j
    double ratio_threshold = 0.5;
};

/// Greedy minimal selection; deterministic. Throws Infeasible when no
/// admissible level exists within the horizon.
LevelSequence select_levels(const TorusSystem& sys, const RateFunction& psi, unsigned levels,
                            double ratio_threshold, unsigned long horizon = 512);

struct TreeNode {
    RatVec center;
    Rat mass;
    std::int64_t parent = -1;  // index into the previous level, -1 at the root level
};

/// Nested family tree with an exact rational mass on every node.
/// Invariants kept by construction: children of a node split its mass
/// exactly, each level sums to 1, children are strictly contained in
/// their parents.
struct MassTree {
    LevelSequence seq;
    std::vector<std::shared_ptr<const EllipsoidShape>> shapes;  // one per level
    std::vector<std::vector<TreeNode>> levels;
    std::vector<bool> step_scale_ok;  // per step j -> j+1: ell_{n_j,d} (lambda_1^{n_{j+1}}-1)/sqrt(d) > 1

    std::size_t depth() const { return levels.size(); }
};

MassTree build_tree(const TorusSystem& sys, const RateFunction& psi, const LevelSequence& seq,
                    const Int& node_cap);

struct MassBoundsReport {
    double fitted_c1 = 1.0;  // smallest C >= 1 with every mass in [C^{1-j}, C^{j-1}] * model
    bool level1_exact = true;                 // level-1 masses equal the model exactly
    std::vector<double> level_ratio_min;      // mass / model extremes per level
    std::vector<double> level_ratio_max;
    std::vector<std::size_t> flagged_steps;   // steps whose scale condition failed
    std::size_t nodes_fitted = 0;
    std::size_t nodes_excluded = 0;
};

MassBoundsReport mass_bounds_check(const TorusSystem& sys, const RateFunction& psi,
                                   const MassTree& tree);

struct CoverCountReport {
    Int product;      // the two-regime ceiling product
    Int empirical;    // grid cover count of ball-ellipsoid intersection (d <= 2, else 0)
    double ratio = 0.0;  // empirical / product
};

/// Number of radius-r3 balls needed to cover B(x, r1) intersected with
/// the degree-n ellipsoid centered at c, bounded by the two-regime
/// product; the empirical grid count validates the bound.
CoverCountReport ball_cover_count(const TorusSystem& sys, const RatVec& x, const Scalar& r1,
                                  const RatVec& c, unsigned long n, const RateFunction& psi,
                                  const Scalar& r3);

struct LocalDimensionRow {
    RatVec x;
    double r = 0.0;
    double mu = 0.0;
    double quotient = 0.0;  // log mu / log r
};

struct LocalDimensionReport {
    std::vector<LocalDimensionRow> rows;
    double min_quotient = 0.0;
    std::uint64_t seed = 0;
};

/// mu(B(x,r)) by exact mass summation over intersecting leaves, for
/// sampled centers (leaf centers and uniform draws inside random
/// leaves, alternating) and the given radii.
LocalDimensionReport local_dimension_sample(const TorusSystem& sys, const MassTree& tree,
                                            std::size_t samples, const std::vector<double>& radii,
                                            std::uint64_t seed);

}  // namespace torrec
