#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "torrec/periodic.hpp"
#include "torrec/rate.hpp"

namespace torrec {

/// Geometry shared by all members of one family: the shape matrix
/// M = A^n - I, the radius source psi(n), and the two semi-axis ladders
/// (certified singular values vs the |lambda_j^n - 1| model), both
/// descending.
struct EllipsoidShape {
    unsigned long degree = 0;
    Scalar psi;
    IntegerMatrix M;
    std::vector<double> semi_exact;
    std::vector<double> semi_exact_radius;
    std::vector<double> semi_model;

    std::size_t dim() const { return M.dim(); }
    double max_semi_axis() const { return semi_exact.empty() ? 0.0 : semi_exact.front(); }
};

/// One member R_{n,i}: a periodic center plus the shared shape.
/// Membership: exists z in {-1,0,1}^d with ||M (x - center + z)|| < psi,
/// evaluated as an exact quadratic form whenever x, center, psi are
/// rational. Valid while every semi-axis is below 1/2.
class Ellipsoid {
public:
    Ellipsoid(RatVec center, std::shared_ptr<const EllipsoidShape> shape)
        : center_(std::move(center)), shape_(std::move(shape)) {}

    const RatVec& center() const { return center_; }
    const EllipsoidShape& shape() const { return *shape_; }
    unsigned long degree() const { return shape_->degree; }

    bool contains(const RatVec& x) const;

private:
    RatVec center_;
    std::shared_ptr<const EllipsoidShape> shape_;
};

/// The decomposition of one recurrence layer into H_n disjoint
/// translates.
struct EllipsoidFamily {
    unsigned long degree = 0;
    std::shared_ptr<const EllipsoidShape> shape;
    std::vector<RatVec> centers;
    Int count;

    Ellipsoid member(std::size_t i) const { return Ellipsoid(centers.at(i), shape); }
};

/// Build the shape (certified semi-axes included) without enumerating
/// centers.
std::shared_ptr<const EllipsoidShape> make_shape(const TorusSystem& sys, unsigned long n,
                                                 const RateFunction& psi);

/// x belongs to the degree-n recurrence layer: quotient distance of
/// (A^n - I)x mod 1 to 0 is < psi(n). Exact for rational x when psi(n)
/// is exact. Requires psi(n) < 1/2.
bool membership(const RatVec& x, const TorusSystem& sys, unsigned long n, const RateFunction& psi);
bool membership(const std::vector<double>& x, const TorusSystem& sys, unsigned long n,
                const RateFunction& psi);

/// Materialize the full family of degree n (H_n <= cap).
EllipsoidFamily decompose_layer(const TorusSystem& sys, unsigned long n, const RateFunction& psi,
                                const Int& cap);

struct SemiAxesReport {
    unsigned long degree = 0;
    std::vector<double> exact_axes;
    std::vector<double> exact_radius;
    std::vector<double> model_axes;
    std::vector<double> ratio;  // exact / model per j
    double max_deviation = 0.0;  // max_j max(ratio, 1/ratio)
};

SemiAxesReport semi_axes(const TorusSystem& sys, unsigned long n, const RateFunction& psi);

/// Least-squares exponent of log(max deviation) against log(n) over a
/// sweep; bounded for diagonalizable maps, polynomial in general.
struct AxisGrowthFit {
    std::vector<SemiAxesReport> sweep;
    double exponent = 0.0;
};
AxisGrowthFit fit_axis_growth(const TorusSystem& sys, const RateFunction& psi, unsigned long n_from,
                              unsigned long n_to);

struct SeparationReport {
    unsigned long degree = 0;
    bool single = false;          // H_n = 1: no pairs, distance is +infinity
    double lower_bound = 0.0;     // certified lower bound on the min pair distance
    double required = 0.0;        // 2 (1/3 - psi(n)) (lambda_d^n - 1)^{-1}
    bool satisfied = false;
    bool exact = false;           // d = 1 path is exact rational
};

/// Certified lower bound on the shortest distance between members of the
/// degree-n family, checked against the separation bound. Streams the
/// centers, so only the candidate nearest pairs are ever materialized.
/// Requires psi(1) < 1/3. Exact for d = 1.
SeparationReport ellipsoid_min_distance(const TorusSystem& sys, unsigned long n,
                                        const RateFunction& psi, const Int& cap);

struct CoverReport {
    unsigned long degree = 0;
    int k = 1;
    double per_ellipsoid_count = 0.0;  // prod_{j<=k} (lambda_k^n-1)/(lambda_j^n-1)
    double log_radius = 0.0;           // log of the covering radius ell_{n,k}
    double log_count_total = 0.0;      // log(H_n * per-ellipsoid count)

    double log_cost(double s) const { return log_count_total + s * log_radius; }
};

/// Ball-covering count of one ellipsoid at radius ell_{n,k} and the
/// covering s-cost of the whole layer.
CoverReport covering_count(const TorusSystem& sys, unsigned long n, const RateFunction& psi, int k);

enum class SeriesVerdict { Converging, Diverging, Inconclusive };

struct SeriesReport {
    double s = 0.0;
    std::vector<double> log_terms;  // min over k of the s-cost, per n
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    double tail_ratio_low = 0.0;   // min successive log-difference over the tail
    double tail_ratio_high = 0.0;  // max
};

/// Partial sums of the covering s-cost over an n-range with a
/// convergence verdict from the tail term ratios.
SeriesReport upper_bound_sum(const TorusSystem& sys, const RateFunction& psi, double s,
                             unsigned long n_from, unsigned long n_to, double margin = 0.02);

/// All hit times n <= N with membership(x, n) true; exact for rational x.
std::vector<unsigned long> recurrence_indices(const RatVec& x, const TorusSystem& sys,
                                              const RateFunction& psi, unsigned long N);

struct OrbitStatistic {
    double min_value = 0.0;
    unsigned long argmin = 0;
};

/// min_{1<=n<=N} n^{1/tau} * rho(T^n x, x) for exact rational starts.
OrbitStatistic orbit_return_statistic(const RatVec& x, const TorusSystem& sys, double tau,
                                      unsigned long N);

struct BoxCountReport {
    std::vector<int> scale_exponents;  // side = 2^-k
    std::vector<Int> counts;
    double slope = 0.0;
    bool monotone = true;  // counts nonincreasing as side grows
};

/// Grid counts of the union of the given families over dyadic scales,
/// with exact cell/ellipsoid intersection tests (d <= 2). Boxes per
/// scale capped at 10^8.
BoxCountReport box_count_dimension(const TorusSystem& sys,
                                   const std::vector<EllipsoidFamily>& families,
                                   const std::vector<int>& scale_exponents);

// -- exact convex tests shared with the tree builder --------------------------

/// Squared euclidean minimum of ||M (x - c)||^2 over the box
/// prod[lo_i, hi_i], exact (KKT enumeration over the 3^d face lattice).
Rat min_quadratic_over_box(const IntegerMatrix& M, const RatVec& c, const RatVec& lo,
                           const RatVec& hi);

}  // namespace torrec
