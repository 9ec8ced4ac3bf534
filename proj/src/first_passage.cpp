#include "fpt/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fpt/detail/scale_tables.hpp"
#include "fpt/errors.hpp"
#include "fpt/interp.hpp"
#include "fpt/quadrature.hpp"

namespace fpt {

namespace {

double effective_abs_tol(const FptOptions& opt, double x_l, double xc) {
  return opt.abs_tol < 0.0 ? 1e-12 * (xc - x_l) : opt.abs_tol;
}

// One resolution level: the scale/speed tables plus the moment recursion
// cumulatives built on them.
//
//   G1[n-1](x) = \int_x^{xc} SInt(z) M_{n-1}(z) mu(z) dz   (pure cumulative
//                from the right; the below-grid tail enters only through
//                g1_tail when evaluating at x0 = x_l)
//   G2[n-1](x) = \int_{x_l}^{x} M_{n-1}(z) mu(z) dz        (tail included)
//
// and the n-th moment for an entrance-type left boundary is
//   M_n(x0) = 2n [ G1[n-1](x0) + SInt(x0) G2[n-1](x0) ],
// with the exact derivative   M_n'(x0) = -2n s(x0) G2[n-1](x0).
struct Stage {
  std::unique_ptr<detail::ScaleTables> tables;
  std::vector<HermiteTable> G1;      // slot n-1 for moment n
  std::vector<HermiteTable> G2;
  std::vector<double> g1_tail;       // below-innermost-node additions
  std::vector<double> boundary;      // M_n(x_l) = 2n (G1 at node 0 + tail)
  std::vector<HermiteTable> M;       // M_n on the nodes (recursion storage)
  double err = 0.0;
};

// Extends the recursion of `st` up to n_max moment levels.
void extend_recursion(Stage* st, int n_max) {
  const detail::ScaleTables& T = *st->tables;
  const auto& x = T.nodes();
  const std::size_t n = x.size();
  const auto& s_nd = T.node_s();
  const auto& mu_nd = T.node_mu();
  const auto& sint_nd = T.node_SInt();
  const bool tail_ok = T.mu_tail_finite();

  for (int lvl = static_cast<int>(st->M.size()) + 1; lvl <= n_max; ++lvl) {
    const bool base = (lvl == 1);
    const HermiteTable* prev = base ? nullptr : &st->M[lvl - 2];
    const double prev_at_xl =
        base ? 1.0 : (tail_ok ? st->boundary[lvl - 2] : 0.0);

    const RealFn f_g1 = [&](double z) {
      const double w = base ? 1.0 : (*prev)(z);
      return T.SInt(z) * T.mu(z) * w;
    };
    const RealFn f_g2 = [&](double z) {
      const double w = base ? 1.0 : (*prev)(z);
      return T.mu(z) * w;
    };

    std::vector<double> g1(n, 0.0), g2(n, 0.0);
    double cell_err = 0.0;
    for (std::size_t i = n - 1; i > 0; --i)
      g1[i - 1] = g1[i] + T.integrate_cell(i - 1, f_g1, &cell_err);
    const double g2_tail = tail_ok ? prev_at_xl * T.mu_tail() : 0.0;
    g2[0] = g2_tail;
    for (std::size_t i = 0; i + 1 < n; ++i)
      g2[i + 1] = g2[i] + T.integrate_cell(i, f_g2, &cell_err);

    // Exact nodal derivatives of the cumulatives.
    std::vector<double> dg1(n), dg2(n), mv(n), dmv(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = base ? 1.0 : prev->values()[i];
      dg1[i] = -sint_nd[i] * mu_nd[i] * w;
      dg2[i] = mu_nd[i] * w;
      mv[i] = 2.0 * lvl * (g1[i] + sint_nd[i] * g2[i]);
      dmv[i] = -2.0 * lvl * s_nd[i] * g2[i];
    }

    // Boundary start (x0 = x_l): the S-weighted term vanishes in the limit;
    // the below-grid remainder of G1 is approximated by its leading part,
    // with the neglected correction folded into the error budget.
    const double tail_g1 = tail_ok ? sint_nd[0] * prev_at_xl * T.mu_tail() : 0.0;
    const double tail_corr =
        tail_ok ? s_nd[0] * (x[0] - T.x_l()) * prev_at_xl * T.mu_tail() : 0.0;
    st->boundary.push_back(2.0 * lvl * (g1[0] + tail_g1));
    st->g1_tail.push_back(tail_g1);
    st->err += cell_err + std::abs(tail_corr);

    st->G1.emplace_back(std::vector<double>(x), std::move(g1), std::move(dg1));
    st->G2.emplace_back(std::vector<double>(x), std::move(g2), std::move(dg2));
    st->M.emplace_back(std::vector<double>(x), std::move(mv), std::move(dmv));
  }
}

Stage build_stage(const DiffusionModel& model, double xc, int per_octave,
                  int n_max, const FptOptions& opt) {
  detail::TableOptions topt;
  topt.per_octave = per_octave;
  topt.rel_tol = std::min(1e-9, opt.rel_tol);
  Stage st;
  st.tables = std::make_unique<detail::ScaleTables>(model, xc, topt);
  st.err = st.tables->table_error();
  extend_recursion(&st, n_max);
  return st;
}

// Entrance-form moment evaluated from a stage (valid in the singular-limit
// formulas; also used as the refinement metric for any model).
double stage_moment(const Stage& st, int n, double x0) {
  const detail::ScaleTables& T = *st.tables;
  if (x0 >= T.xc()) return 0.0;
  if (x0 <= T.nodes().front()) return st.boundary[n - 1];
  return 2.0 * n * (st.G1[n - 1](x0) + T.SInt(x0) * st.G2[n - 1](x0));
}

// Probe set for refinement decisions: fixed fractions of (x_l, xc), plus
// the boundary itself (so the ladder is independent of the caller's x0 and
// delta, which keeps repeated builds bit-identical across entry points).
const double kProbeFracs[] = {1e-6, 0.01, 0.05, 0.2, 0.5, 0.8, 0.95};

double stage_disagreement(const Stage& a, const Stage& b, int n_max) {
  const double x_l = a.tables->x_l();
  const double xc = a.tables->xc();
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    if (a.tables->mu_tail_finite() && b.tables->mu_tail_finite()) {
      const double va = a.boundary[n - 1], vb = b.boundary[n - 1];
      worst = std::max(worst, std::abs(va - vb) /
                                  std::max({std::abs(va), std::abs(vb), 1e-300}));
    }
    for (double f : kProbeFracs) {
      const double x0 = x_l + f * (xc - x_l);
      const double va = stage_moment(a, n, x0);
      const double vb = stage_moment(b, n, x0);
      worst = std::max(worst, std::abs(va - vb) /
                                  std::max({std::abs(va), std::abs(vb), 1e-300}));
    }
  }
  return worst;
}

// Two-level solver: coarse/fine stages at per-octave densities p and 2p,
// refined until the moments stop moving. The fine stage provides values;
// the coarse-fine disagreement provides the error estimate.
struct TwoStage {
  Stage coarse, fine;
};

TwoStage build_ladder(const DiffusionModel& model, double xc, int n_max,
                      const FptOptions& opt) {
  int p = std::max(2, opt.start_per_octave);
  TwoStage two;
  two.coarse = build_stage(model, xc, p, n_max, opt);
  for (;;) {
    two.fine = build_stage(model, xc, 2 * p, n_max, opt);
    if (stage_disagreement(two.coarse, two.fine, n_max) <= opt.refine_tol ||
        2 * p >= opt.max_per_octave)
      break;
    two.coarse = std::move(two.fine);
    p *= 2;
  }
  return two;
}

void check_entrance_preconditions(const TwoStage& two) {
  const detail::ScaleTables& T = *two.fine.tables;
  if (!T.mu_tail_finite())
    throw ValidationError(
        "singular-boundary passage formulas need a finite speed measure at "
        "x_l (entrance-type boundary)");
  const RealFn s_tab = [&T](double y) { return T.s(y); };
  const ImproperResult ir = integrate_improper_left(s_tab, T.x_l(), T.xc());
  if (ir.tag != Divergence::Infinite)
    throw ValidationError(
        "singular-boundary passage formulas need a divergent scale integral "
        "at x_l (entrance-type boundary)");
}

double stage_error(const TwoStage& two, int n, double x0, double abs_floor) {
  return std::abs(stage_moment(two.fine, n, x0) -
                  stage_moment(two.coarse, n, x0)) +
         abs_floor;
}

void validate_target(const DiffusionModel& model, double xc) {
  if (!(model.x_l < xc) || !(xc > model.x_l) || !(xc <= model.x_c))
    throw ValidationError("fpt: target xc must lie in (x_l, x_c]");
}

// ---------------------------------------------------------------------------
// Regular (two-absorbing-boundary) moments on [delta, xc].
//
// With rho(x) = S[x,xc]/S[delta,xc] and the cumulatives
//   A_n(x) = \int_x^{xc} S[z,xc] M_{n-1} mu dz,
//   B_n(x) = \int_delta^x M_{n-1} mu dz,   C_n(x) = \int_delta^x S[z,xc] M_{n-1} mu dz,
// the Green's-function solution of the moment hierarchy is
//   M_n(x) = 2n [ (1-rho) A_n + rho (S[delta,xc] B_n - C_n) ],
// whose derivative collapses to 2n (s(x)/S[delta,xc]) (A_n - S[delta,xc] B_n + C_n).
// ---------------------------------------------------------------------------

double regular_m1_from_stage(const Stage& st, double delta, double x0) {
  const detail::ScaleTables& T = *st.tables;
  if (x0 >= T.xc()) return 0.0;
  const double sint_d = T.SInt(delta);
  const double sint_0 = T.SInt(x0);
  const double rho = sint_0 / sint_d;
  const double a1 = st.G1[0](x0);
  const double btilde = sint_d * (T.MuInt(x0) - T.MuInt(delta)) -
                        (st.G1[0](delta) - a1);
  return 2.0 * ((1.0 - rho) * a1 + rho * btilde);
}

struct RegularRecursion {
  std::vector<double> u;             // uniform nodes on [delta, xc]
  std::vector<HermiteTable> A, B, C; // slot n-1 for moment n
  std::vector<HermiteTable> M;
  double sint_delta = 0.0;
  double err = 0.0;
};

RegularRecursion build_regular_recursion(const Stage& st, double delta,
                                         double xc, int n_nodes, int n_max) {
  const detail::ScaleTables& T = *st.tables;
  RegularRecursion rec;
  rec.sint_delta = T.SInt(delta);
  const std::size_t N = static_cast<std::size_t>(n_nodes);
  rec.u.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i)
    rec.u[i] = delta + (xc - delta) * static_cast<double>(i) / N;
  rec.u.back() = xc;

  std::vector<double> s_nd(N + 1), mu_nd(N + 1), sint_nd(N + 1), rho(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    s_nd[i] = T.s(rec.u[i]);
    mu_nd[i] = T.mu(rec.u[i]);
    sint_nd[i] = T.SInt(rec.u[i]);
    rho[i] = sint_nd[i] / rec.sint_delta;
  }

  for (int lvl = 1; lvl <= n_max; ++lvl) {
    const bool base = (lvl == 1);
    const HermiteTable* prev = base ? nullptr : &rec.M[lvl - 2];
    const RealFn f_a = [&](double z) {
      const double w = base ? 1.0 : (*prev)(z);
      return T.SInt(z) * T.mu(z) * w;
    };
    const RealFn f_b = [&](double z) {
      const double w = base ? 1.0 : (*prev)(z);
      return T.mu(z) * w;
    };
    std::vector<double> a(N + 1, 0.0), b(N + 1, 0.0), c(N + 1, 0.0);
    for (std::size_t i = N; i > 0; --i) {
      const QuadResult qa =
          integrate_gk15_panel(f_a, rec.u[i - 1], rec.u[i]);
      const QuadResult qb =
          integrate_gk15_panel(f_b, rec.u[i - 1], rec.u[i]);
      a[i - 1] = a[i] + qa.value;
      rec.err += qa.error + qb.error;
      // forward sums filled below from the same cells
      c[i - 1] = qa.value;  // reuse storage: cell value, fixed up next
      b[i - 1] = qb.value;
    }
    // Convert cell values into ascending cumulatives from delta.
    double run_b = 0.0, run_c = 0.0;
    std::vector<double> bc(N + 1, 0.0), cc(N + 1, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      run_b += b[i];
      run_c += c[i];
      bc[i + 1] = run_b;
      cc[i + 1] = run_c;
    }
    std::vector<double> mv(N + 1), dmv(N + 1), da(N + 1), db(N + 1),
        dc(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
      const double w = base ? 1.0 : prev->values()[i];
      const double btilde = rec.sint_delta * bc[i] - cc[i];
      mv[i] = 2.0 * lvl * ((1.0 - rho[i]) * a[i] + rho[i] * btilde);
      dmv[i] = 2.0 * lvl * (s_nd[i] / rec.sint_delta) * (a[i] - btilde);
      da[i] = -sint_nd[i] * mu_nd[i] * w;
      db[i] = mu_nd[i] * w;
      dc[i] = sint_nd[i] * mu_nd[i] * w;
    }
    rec.A.emplace_back(std::vector<double>(rec.u), std::move(a), std::move(da));
    rec.B.emplace_back(std::vector<double>(rec.u), std::move(bc), std::move(db));
    rec.C.emplace_back(std::vector<double>(rec.u), std::move(cc), std::move(dc));
    rec.M.emplace_back(std::vector<double>(rec.u), std::move(mv), std::move(dmv));
  }
  return rec;
}

double regular_moment(const RegularRecursion& rec, const Stage& st, int n,
                      double x0) {
  const detail::ScaleTables& T = *st.tables;
  if (x0 >= T.xc()) return 0.0;
  const double rho = T.SInt(x0) / rec.sint_delta;
  const double a = rec.A[n - 1](x0);
  const double btilde = rec.sint_delta * rec.B[n - 1](x0) - rec.C[n - 1](x0);
  return 2.0 * n * ((1.0 - rho) * a + rho * btilde);
}

void validate_regular_inputs(const DiffusionModel& model, double delta,
                             double x0, double xc) {
  validate_target(model, xc);
  if (!(model.x_l < delta) || !(delta < x0) || !(x0 <= xc))
    throw ValidationError("fpt: need x_l < delta < x0 <= xc");
}

}  // namespace

double mean_fpt_regular(const DiffusionModel& model, double delta, double x0,
                        double xc, const FptOptions& opt) {
  validate_regular_inputs(model, delta, x0, xc);
  if (x0 == xc) return 0.0;
  const TwoStage two = build_ladder(model, xc, 1, opt);
  return regular_m1_from_stage(two.fine, delta, x0);
}

MomentCurve moments_fpt_regular(const DiffusionModel& model, double delta,
                                double x0, double xc, int n_max,
                                const FptOptions& opt) {
  validate_regular_inputs(model, delta, x0, xc);
  if (n_max < 1) throw ValidationError("fpt: n_max must be >= 1");
  MomentCurve curve;
  curve.start_points = {x0};
  curve.target = xc;
  curve.moments.assign(n_max, {0.0});
  curve.quadrature_error.assign(n_max, {0.0});
  const double abs_floor = effective_abs_tol(opt, model.x_l, xc);
  if (x0 == xc) {
    for (int n = 1; n <= n_max; ++n) curve.quadrature_error[n - 1][0] = 0.0;
    return curve;
  }
  const TwoStage two = build_ladder(model, xc, 1, opt);
  curve.moments[0][0] = regular_m1_from_stage(two.fine, delta, x0);
  curve.quadrature_error[0][0] =
      std::abs(curve.moments[0][0] -
               regular_m1_from_stage(two.coarse, delta, x0)) +
      abs_floor;
  if (n_max >= 2) {
    // Uniform-grid recursion on [delta, xc], doubled until stable.
    int n_nodes = 16 * std::max(2, opt.start_per_octave);
    RegularRecursion rc =
        build_regular_recursion(two.fine, delta, xc, n_nodes, n_max);
    for (;;) {
      RegularRecursion rf =
          build_regular_recursion(two.fine, delta, xc, 2 * n_nodes, n_max);
      double worst = 0.0;
      for (int n = 2; n <= n_max; ++n) {
        for (double f : kProbeFracs) {
          const double xp = delta + (xc - delta) * f;
          const double vc = regular_moment(rc, two.fine, n, xp);
          const double vf = regular_moment(rf, two.fine, n, xp);
          worst = std::max(worst, std::abs(vc - vf) /
                                      std::max({std::abs(vc), std::abs(vf),
                                                1e-300}));
        }
      }
      const bool done =
          worst <= opt.refine_tol ||
          2 * n_nodes >= 16 * std::max(2, opt.max_per_octave) * 4;
      if (done) {
        for (int n = 2; n <= n_max; ++n) {
          curve.moments[n - 1][0] = regular_moment(rf, two.fine, n, x0);
          curve.quadrature_error[n - 1][0] =
              std::abs(curve.moments[n - 1][0] -
                       regular_moment(rc, two.fine, n, x0)) +
              abs_floor;
        }
        break;
      }
      rc = std::move(rf);
      n_nodes *= 2;
    }
  }
  return curve;
}

double mean_fpt_entrance(const DiffusionModel& model, double x0, double xc,
                         const FptOptions& opt) {
  validate_target(model, xc);
  if (!(model.x_l <= x0) || !(x0 <= xc))
    throw ValidationError("fpt: need x_l <= x0 <= xc");
  if (x0 == xc) return 0.0;
  const TwoStage two = build_ladder(model, xc, 1, opt);
  check_entrance_preconditions(two);
  return stage_moment(two.fine, 1, x0);
}

double mean_fpt_from_boundary(const DiffusionModel& model, double xc,
                              const FptOptions& opt) {
  return mean_fpt_entrance(model, model.x_l, xc, opt);
}

MomentCurve moments_fpt_entrance(const DiffusionModel& model, double x0,
                                 double xc, int n_max, const FptOptions& opt) {
  const std::vector<double> grid = {x0};
  return fpt_curve(model, grid, xc, n_max, opt);
}

MomentCurve moments_fpt_from_boundary(const DiffusionModel& model, double xc,
                                      int n_max, const FptOptions& opt) {
  const std::vector<double> grid = {model.x_l};
  return fpt_curve(model, grid, xc, n_max, opt);
}

MomentCurve fpt_curve(const DiffusionModel& model,
                      const std::vector<double>& grid, double xc, int n_max,
                      const FptOptions& opt) {
  validate_target(model, xc);
  if (n_max < 1) throw ValidationError("fpt: n_max must be >= 1");
  if (grid.empty()) throw ValidationError("fpt: empty start grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= model.x_l) || !(grid[i] <= xc))
      throw ValidationError("fpt: start point outside [x_l, xc] at index " +
                            std::to_string(i));
    if (i > 0 && !(grid[i] >= grid[i - 1]))
      throw ValidationError("fpt: start grid must be ascending at index " +
                            std::to_string(i));
  }
  const TwoStage two = build_ladder(model, xc, n_max, opt);
  check_entrance_preconditions(two);
  const double abs_floor = effective_abs_tol(opt, model.x_l, xc);

  MomentCurve curve;
  curve.start_points = grid;
  curve.target = xc;
  curve.moments.assign(n_max, std::vector<double>(grid.size(), 0.0));
  curve.quadrature_error.assign(n_max,
                                std::vector<double>(grid.size(), 0.0));
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == xc) continue;  // exact zero, no quadrature
      curve.moments[n - 1][i] = stage_moment(two.fine, n, grid[i]);
      curve.quadrature_error[n - 1][i] =
          stage_error(two, n, grid[i], abs_floor);
    }
  }
  return curve;
}

}  // namespace fpt
