#include "torrec/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace torrec {

namespace {

Rat dyadic(const Scalar& s) { return s.exact ? *s.exact : Rat(s.value); }

double log_rat(const Rat& q) {
    signed long exp_num, exp_den;
    const double mn = mpz_get_d_2exp(&exp_num, q.get_num().get_mpz_t());
    const double md = mpz_get_d_2exp(&exp_den, q.get_den().get_mpz_t());
    return std::log(std::abs(mn / md)) +
           static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

// strict scale condition between consecutive levels:
// psi(a) (lambda_d^a - 1)^{-1} > (lambda_1^b - 1)^{-1}
bool separation_ok(const TorusSystem& sys, const RateFunction& psi, unsigned long a,
                   unsigned long b) {
    const std::size_t d = sys.dim();
    auto fd = sys.modulus_power_factor_exact(static_cast<int>(d), a);
    auto f1 = sys.modulus_power_factor_exact(1, b);
    const Scalar pa = psi.psi(a);
    if (fd && f1) return dyadic(pa) * *f1 > *fd;
    // certified float comparison with outward rounding
    const double lhs = pa.value * sys.modulus_power_factor(1, b) * (1.0 - 1e-12);
    const double rhs = sys.modulus_power_factor(static_cast<int>(d), a) * (1.0 + 1e-12);
    return lhs > rhs;
}

}  // namespace

LevelSequence select_levels(const TorusSystem& sys, const RateFunction& psi, unsigned levels,
                            double ratio_threshold, unsigned long horizon) {
    if (levels < 1) throw UsageError("need at least one level");
    LevelSequence seq;
    seq.ratio_threshold = ratio_threshold;

    unsigned long n1 = 0;
    for (unsigned long n = 1; n <= horizon; ++n) {
        if (!psi.covers(n)) continue;
        if (dyadic(psi.psi(n)) < Rat(1, 3)) {
            n1 = n;
            break;
        }
    }
    if (n1 == 0) throw Infeasible("no level with psi(n) < 1/3 within the horizon");
    seq.levels.push_back(n1);

    unsigned long sum = n1;
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (unsigned j = 2; j <= levels; ++j) {
        unsigned long chosen = 0;
        for (unsigned long n = seq.levels.back() + 1; n <= horizon; ++n) {
            if (!psi.covers(n)) continue;
            const double ratio = static_cast<double>(sum) / static_cast<double>(n);
            if (ratio > ratio_threshold) continue;
            if (!(ratio < prev_ratio)) continue;
            if (!separation_ok(sys, psi, seq.levels.back(), n)) continue;
            chosen = n;
            break;
        }
        if (chosen == 0) throw Infeasible("no admissible level n_" + std::to_string(j) +
                                          " within the horizon");
        seq.levels.push_back(chosen);
        const double r = static_cast<double>(sum) / static_cast<double>(chosen);
        seq.ratios.push_back(r);
        prev_ratio = r;
        sum += chosen;
    }
    return seq;
}

namespace {

// containment test: child ellipsoid strictly inside the parent.
struct ContainmentTester {
    const TorusSystem& sys;
    std::shared_ptr<const EllipsoidShape> parent;
    std::shared_ptr<const EllipsoidShape> child;
    double sigma_max_ratio = 0.0;  // certified upper bound on sigma_max(M_p M_c^{-1})
    RationalMatrix child_inv;

    ContainmentTester(const TorusSystem& s, std::shared_ptr<const EllipsoidShape> p,
                      std::shared_ptr<const EllipsoidShape> c)
        : sys(s), parent(std::move(p)), child(std::move(c)) {
        child_inv = RationalMatrix::from_integer(child->M).inverse();
        RationalMatrix g = RationalMatrix::from_integer(parent->M) * child_inv;
        auto svs = singular_values(g, 1e-9);
        sigma_max_ratio = svs.back().value + svs.back().radius;
    }

    bool contains(const RatVec& parent_center, const RatVec& child_center) const {
        const std::size_t d = parent_center.size();
        const Rat psi_p = dyadic(parent->psi);
        if (d == 1) {
            // exact interval inclusion
            const Rat rp = psi_p / Rat(abs(parent->M.at(0, 0)));
            const Rat rc = dyadic(child->psi) / Rat(abs(child->M.at(0, 0)));
            Rat delta = frac_part(child_center[0] - parent_center[0]);
            if (delta > Rat(1, 2)) delta = 1 - delta;
            return delta < rp - rc;
        }
        // support bound: ||M_p (c_c - c_p)|| + psi_c sigma_max < psi_p
        Rat slack = psi_p - Rat(dyadic(child->psi).get_d() * sigma_max_ratio * (1.0 + 1e-12));
        if (slack <= 0) return false;
        const Rat slack2 = slack * slack;
        const double span = parent->max_semi_axis() + 1e-9;
        const long zmax = static_cast<long>(std::floor(span));
        const long zlo = -zmax - 1, zhi = zmax;
        RatVec v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = frac_part(child_center[i] - parent_center[i]);
        std::vector<long> z(d, zlo);
        for (;;) {
            Rat q(0);
            for (std::size_t r = 0; r < d; ++r) {
                Rat w(0);
                for (std::size_t c2 = 0; c2 < d; ++c2)
                    if (parent->M.at(r, c2) != 0)
                        w += Rat(parent->M.at(r, c2)) * (v[c2] + Rat(z[c2]));
                q += w * w;
            }
            if (q < slack2) return true;
            std::size_t i = 0;
            for (; i < d; ++i) {
                if (++z[i] <= zhi) break;
                z[i] = zlo;
            }
            if (i == d) break;
        }
        return false;
    }
};

// periodic points of the child shape whose centers can lie inside the
// parent's bounding box around `center`
std::vector<RatVec> candidate_centers(const EllipsoidShape& parent, const EllipsoidShape& child,
                                      const RatVec& center) {
    const std::size_t d = parent.dim();
    // parent bbox half-widths, outward-rounded
    RationalMatrix pinv = RationalMatrix::from_integer(parent.M).inverse();
    RatVec ext(d);
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = pinv.at(i, j).get_d();
            acc += v * v;
        }
        ext[i] = Rat(parent.psi.value * std::sqrt(acc) * (1.0 + 1e-9) + 1e-12);
    }
    // image of the box corners under the child matrix -> integer ranges
    std::vector<Int> zlo(d), zhi(d);
    bool first = true;
    std::vector<int> corner(d, 0);
    for (;;) {
        RatVec pt(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (corner[i])
                pt[i] = center[i] + ext[i];
            else
                pt[i] = center[i] - ext[i];
        }
        RatVec img(d, Rat(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (child.M.at(i, j) != 0) img[i] += Rat(child.M.at(i, j)) * pt[j];
        for (std::size_t i = 0; i < d; ++i) {
            Int fl, ce;
            mpz_fdiv_q(fl.get_mpz_t(), img[i].get_num().get_mpz_t(), img[i].get_den().get_mpz_t());
            mpz_cdiv_q(ce.get_mpz_t(), img[i].get_num().get_mpz_t(), img[i].get_den().get_mpz_t());
            if (first || fl < zlo[i]) zlo[i] = fl;
            if (first || ce > zhi[i]) zhi[i] = ce;
        }
        first = false;
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++corner[i] <= 1) break;
            corner[i] = 0;
        }
        if (i == d) break;
    }

    RationalMatrix cinv = RationalMatrix::from_integer(child.M).inverse();
    std::vector<RatVec> out;
    std::vector<Int> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = zlo[i];
    for (;;) {
        RatVec x(d, Rat(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (cinv.at(i, j) != 0) x[i] += cinv.at(i, j) * Rat(z[j]);
        out.push_back(reduce_mod1(std::move(x)));
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++z[i] <= zhi[i]) break;
            z[i] = zlo[i];
        }
        if (i == d) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

MassTree build_tree(const TorusSystem& sys, const RateFunction& psi, const LevelSequence& seq,
                    const Int& node_cap) {
    if (seq.levels.empty()) throw UsageError("empty level sequence");
    MassTree tree;
    tree.seq = seq;
    const std::size_t d = sys.dim();

    // level 1: the full family, equal masses
    const unsigned long n1 = seq.levels.front();
    Int h1 = count_periodic(sys, n1);
    if (h1 > node_cap) throw CapExceeded(h1, "tree level 1");
    auto shape1 = make_shape(sys, n1, psi);
    tree.shapes.push_back(shape1);
    std::vector<TreeNode> level1;
    const Rat mass1 = Rat(1) / Rat(h1);
    for_each_periodic(shape1->M, [&](std::size_t, const RatVec& x) {
        TreeNode node;
        node.center = x;
        node.mass = mass1;
        level1.push_back(std::move(node));
    });
    tree.levels.push_back(std::move(level1));

    for (std::size_t j = 1; j < seq.levels.size(); ++j) {
        const unsigned long np = seq.levels[j - 1];
        const unsigned long nc = seq.levels[j];
        auto shape_c = make_shape(sys, nc, psi);
        const double ell_pd = 2.0 * tree.shapes[j - 1]->psi.value /
                              sys.power_factor(static_cast<int>(d), np);
        tree.step_scale_ok.push_back(
            ell_pd * sys.modulus_power_factor(1, nc) / std::sqrt(static_cast<double>(d)) > 1.0);

        ContainmentTester tester(sys, tree.shapes[j - 1], shape_c);
        std::vector<TreeNode> next;
        const auto& parents = tree.levels[j - 1];
        for (std::size_t pi = 0; pi < parents.size(); ++pi) {
            std::vector<RatVec> kept;
            for (const RatVec& cand : candidate_centers(*tree.shapes[j - 1], *shape_c,
                                                        parents[pi].center))
                if (tester.contains(parents[pi].center, cand)) kept.push_back(cand);
            if (kept.empty()) throw EmptyLevel("parent " + std::to_string(pi) + " at level " +
                                               std::to_string(j) + " has no children");
            const Rat child_mass = parents[pi].mass / Rat(static_cast<unsigned long>(kept.size()));
            for (auto& c : kept) {
                TreeNode node;
                node.center = std::move(c);
                node.mass = child_mass;
                node.parent = static_cast<std::int64_t>(pi);
                next.push_back(std::move(node));
            }
            if (Int(static_cast<unsigned long>(next.size())) > node_cap)
                throw CapExceeded(Int(static_cast<unsigned long>(next.size())), "tree level");
        }
        tree.shapes.push_back(shape_c);
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

MassBoundsReport mass_bounds_check(const TorusSystem& sys, const RateFunction&,
                                   const MassTree& tree) {
    MassBoundsReport rep;
    const std::size_t d = sys.dim();
    rep.level_ratio_min.assign(tree.depth(), std::numeric_limits<double>::infinity());
    rep.level_ratio_max.assign(tree.depth(), -std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < tree.step_scale_ok.size(); ++s)
        if (!tree.step_scale_ok[s]) rep.flagged_steps.push_back(s + 1);

    for (std::size_t j = 0; j < tree.depth(); ++j) {
        const unsigned long nj = tree.seq.levels[j];
        // log model = -log H_{n_j} - d * sum_{k<j} log psi(n_k)
        double log_model = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            log_model -= std::log(sys.power_factor(static_cast<int>(i), nj));
        for (std::size_t k = 0; k < j; ++k)
            log_model -= static_cast<double>(d) * std::log(tree.shapes[k]->psi.value);

        bool excluded = false;
        for (std::size_t s = 0; s < j && s < tree.step_scale_ok.size(); ++s)
            if (!tree.step_scale_ok[s]) excluded = true;

        for (const TreeNode& node : tree.levels[j]) {
            const double lr = log_rat(node.mass) - log_model;
            const double ratio = std::exp(lr);
            rep.level_ratio_min[j] = std::min(rep.level_ratio_min[j], ratio);
            rep.level_ratio_max[j] = std::max(rep.level_ratio_max[j], ratio);
            if (j == 0) {
                if (std::abs(lr) > 1e-12) rep.level1_exact = false;
                continue;
            }
            if (excluded) {
                ++rep.nodes_excluded;
                continue;
            }
            ++rep.nodes_fitted;
            rep.fitted_c1 = std::max(rep.fitted_c1, std::exp(std::abs(lr) / static_cast<double>(j)));
        }
    }
    return rep;
}

CoverCountReport ball_cover_count(const TorusSystem& sys, const RatVec& x, const Scalar& r1,
                                  const RatVec& c, unsigned long n, const RateFunction& psi,
                                  const Scalar& r3) {
    if (!(r3.value <= r1.value)) throw UsageError("cover radius must satisfy r3 <= r1");
    const std::size_t d = sys.dim();
    const Scalar r2 = psi.psi(n);

    CoverCountReport rep;
    rep.product = 1;
    for (std::size_t i = 1; i <= d; ++i) {
        const double axis = r2.value / sys.modulus_power_factor(static_cast<int>(i), n);
        if (r1.value <= axis) {
            Int f;
            mpz_set_d(f.get_mpz_t(), std::ceil(r1.value / r3.value));
            rep.product *= f;
        } else if (axis > r3.value) {
            Int f;
            mpz_set_d(f.get_mpz_t(), std::ceil(axis / r3.value));
            rep.product *= f;
        }
    }

    rep.empirical = 0;
    if (d <= 2) {
        IntegerMatrix M = matrix_power(sys.A, n) - IntegerMatrix::identity(d);
        const Rat r1e = dyadic(r1);
        const Rat r3e = dyadic(r3);
        const Rat psi2 = dyadic(r2) * dyadic(r2);
        // grid of cubes inscribed in radius-r3 balls
        Rat side = 2 * r3e;  // d = 1: the cell is the ball
        if (d == 2) side = Rat(std::sqrt(2.0) * r3e.get_d() * (1.0 - 1e-12));
        const long cells = static_cast<long>(std::ceil(2.0 * r1e.get_d() / side.get_d())) + 1;
        Int count(0);
        std::vector<long> idx(d, 0);
        for (;;) {
            RatVec lo(d), hi(d);
            for (std::size_t i = 0; i < d; ++i) {
                lo[i] = x[i] - r1e + Rat(idx[i]) * side;
                hi[i] = lo[i] + side;
            }
            // cell meets the ball?
            Rat bd2(0);
            for (std::size_t i = 0; i < d; ++i) {
                Rat nearest = x[i];
                if (nearest < lo[i]) nearest = lo[i];
                if (nearest > hi[i]) nearest = hi[i];
                bd2 += (x[i] - nearest) * (x[i] - nearest);
            }
            if (bd2 < r1e * r1e) {
                // cell meets the ellipsoid (nearest torus translate of c)?
                bool meets = false;
                std::vector<long> z(d, -1);
                for (;;) {
                    RatVec cz(d);
                    for (std::size_t i = 0; i < d; ++i) cz[i] = c[i] + Rat(z[i]);
                    if (min_quadratic_over_box(M, cz, lo, hi) < psi2) {
                        meets = true;
                        break;
                    }
                    std::size_t i = 0;
                    for (; i < d; ++i) {
                        if (++z[i] <= 1) break;
                        z[i] = -1;
                    }
                    if (i == d) break;
                }
                if (meets) count += 1;
            }
            std::size_t i = 0;
            for (; i < d; ++i) {
                if (++idx[i] <= cells) break;
                idx[i] = 0;
            }
            if (i == d) break;
        }
        rep.empirical = count;
    }
    rep.ratio = rep.empirical.get_d() / rep.product.get_d();
    return rep;
}

LocalDimensionReport local_dimension_sample(const TorusSystem& sys, const MassTree& tree,
                                            std::size_t samples, const std::vector<double>& radii,
                                            std::uint64_t seed) {
    if (tree.depth() < 2) throw UsageError("local dimension sampling needs at least two levels");
    LocalDimensionReport rep;
    rep.seed = seed;
    rep.min_quotient = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const auto& leaves = tree.levels.back();
    const auto& shape = *tree.shapes.back();
    const std::size_t d = sys.dim();

    RationalMatrix minv = RationalMatrix::from_integer(shape.M).inverse();
    const Rat psi_leaf = dyadic(shape.psi);

    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t li = rng.next_below(leaves.size());
        RatVec x = leaves[li].center;
        if (s % 2 == 1) {
            // uniform draw inside the chosen leaf: rejection in the source ball
            for (int tries = 0; tries < 64; ++tries) {
                RatVec w(d);
                Rat norm2(0);
                for (std::size_t i = 0; i < d; ++i) {
                    const long grid = 1L << 30;
                    Rat u(static_cast<long>(rng.next_below(static_cast<std::uint64_t>(grid))), grid);
                    u.canonicalize();
                    w[i] = (2 * u - 1) * psi_leaf;
                    norm2 += w[i] * w[i];
                }
                if (norm2 < psi_leaf * psi_leaf) {
                    RatVec off = minv.apply(w);
                    for (std::size_t i = 0; i < d; ++i) x[i] += off[i];
                    x = reduce_mod1(std::move(x));
                    break;
                }
            }
        }

        for (double r : radii) {
            const Rat re = Rat(r);
            Rat mu(0);
            for (const TreeNode& leaf : leaves) {
                bool meets;
                if (d == 1) {
                    const Rat rho = psi_leaf / Rat(abs(shape.M.at(0, 0)));
                    Rat delta = frac_part(leaf.center[0] - x[0]);
                    if (delta > Rat(1, 2)) delta = 1 - delta;
                    meets = delta < re + rho;
                } else {
                    // conservative: center distance minus the support extent
                    const double dist =
                        std::sqrt(quotient_dist2(to_double(leaf.center), to_double(x)));
                    meets = dist * (1.0 - 1e-12) <
                            r + shape.max_semi_axis() * (1.0 + 1e-12);
                }
                if (meets) mu += leaf.mass;
            }
            LocalDimensionRow row;
            row.x = x;
            row.r = r;
            row.mu = mu.get_d();
            row.quotient = mu > 0 ? log_rat(mu) / std::log(r) : std::numeric_limits<double>::infinity();
            if (mu > 0) rep.min_quotient = std::min(rep.min_quotient, row.quotient);
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

}  // namespace torrec
