#include "furry/furry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "furry/constants.hpp"
#include "furry/error.hpp"

namespace furry {
namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void validate_config(const OneParticleSystem& sys, const FurryConfig& cfg) {
  if (cfg.n_particles < 1) throw InvalidArgument("furry: n_particles must be >= 1");
  if (!(cfg.z_charge > 0.0)) throw InvalidArgument("furry: z_charge must be positive");
  if (cfg.n_plus < 1 || cfg.n_plus > sys.positive_count()) {
    std::ostringstream os;
    os << "furry: n_plus = " << cfg.n_plus << " outside [1, " << sys.positive_count() << "]";
    throw InvalidArgument(os.str());
  }
  const long long dim = furry_dimension(cfg);
  if (dim > cfg.dimension_cap || dim <= 0) {
    std::ostringstream os;
    os << "furry: dimension " << dim << " exceeds cap " << cfg.dimension_cap;
    throw InvalidArgument(os.str());
  }
}

// sum_j op lifted into slot j.
CMatrix tensor_sum(const CMatrix& op, int n_slots) {
  CMatrix out = lift_to_slot(op, 0, n_slots);
  for (int j = 1; j < n_slots; ++j) out += lift_to_slot(op, j, n_slots);
  return out;
}

CMatrix pair_sum(const CMatrix& w, int n_slots, Index d) {
  const Index dim = static_cast<Index>(ipow(d, n_slots));
  CMatrix out = CMatrix::Zero(dim, dim);
  for (int i = 0; i < n_slots; ++i)
    for (int j = i + 1; j < n_slots; ++j) out += lift_pair(w, i, j, n_slots, d);
  return out;
}

CMatrix compress(const CMatrix& x, const CMatrix& a) {
  if (a.size() == 0) return x;
  return a.adjoint() * x * a;
}

// B_N^* (sum_j |D_0|_j)^{-1} B_N. For N >= 2 through
// 1/S = int exp(x - S e^x) dx, trapezoidal in x; S >= N keeps the integrand
// negligible beyond the chosen limits.
CMatrix free_inverse_weight(const CMatrix& b, const RVector& energies_interleaved, int n_particles) {
  if (n_particles == 1) return b.adjoint() * energies_interleaved.cwiseInverse().cast<Complex>().asDiagonal() * b;
  const double h = 0.15, x_lo = -45.0, x_hi = 4.0;
  const int steps = static_cast<int>(std::ceil((x_hi - x_lo) / h));
  const Index d = b.cols();
  const Index dim = static_cast<Index>(ipow(d, n_particles));
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int s = 0; s <= steps; ++s) {
    const double x = x_lo + s * h;
    const double t = std::exp(x);
    const RVector decay = (-t * energies_interleaved.array()).exp().matrix();
    const CMatrix g = b.adjoint() * decay.cast<Complex>().asDiagonal() * b;
    m += (h * t) * kron_power(g, n_particles);
  }
  return m;
}

RVector interleaved_energies(const ChannelGrid& grid) {
  const RVector e = free_energies(grid);
  RVector out(2 * e.size());
  for (Index i = 0; i < e.size(); ++i) out(2 * i) = out(2 * i + 1) = e(i);
  return out;
}

}  // namespace

std::shared_ptr<const PairInteraction> build_pair_interaction(const ChannelGrid& grid,
                                                              const PairInteractionOptions& opts) {
  if (opts.basis_size > 0) return std::make_shared<const PairInteraction>(grid, opts);
  PairInteractionOptions o = opts;
  for (o.basis_size = std::clamp(static_cast<int>(grid.size()) / 3, 4, 64);; o.basis_size = o.basis_size * 3 / 4) {
    try {
      return std::make_shared<const PairInteraction>(grid, o);
    } catch (const NumericalError&) {
      if (o.basis_size <= 4) throw;
    }
  }
}

long long furry_dimension(const FurryConfig& cfg) {
  if (cfg.antisymmetrize && cfg.n_particles >= 2) return binomial(cfg.n_plus, cfg.n_particles);
  long long d = 1;
  for (int i = 0; i < cfg.n_particles; ++i) {
    d *= cfg.n_plus;
    if (d > cfg.dimension_cap) return d;
  }
  return d;
}

CMatrix lift_pair(const CMatrix& w, int i, int j, int n_slots, Index d) {
  if (i == j || i < 0 || j < 0 || i >= n_slots || j >= n_slots) throw InvalidArgument("lift_pair: bad slots");
  if (w.rows() != d * d || w.cols() != d * d) throw InvalidArgument("lift_pair: W must be d^2 x d^2");
  const Index dim = static_cast<Index>(ipow(d, n_slots));
  CMatrix out = CMatrix::Zero(dim, dim);
  std::vector<Index> stride(static_cast<size_t>(n_slots));
  Index st = 1;
  for (int s = n_slots - 1; s >= 0; --s) {
    stride[static_cast<size_t>(s)] = st;
    st *= d;
  }
  const Index si = stride[static_cast<size_t>(i)], sj = stride[static_cast<size_t>(j)];
  for (Index alpha = 0; alpha < dim; ++alpha) {
    const Index ai = (alpha / si) % d, aj = (alpha / sj) % d;
    const Index base = alpha - ai * si - aj * sj;
    for (Index bi = 0; bi < d; ++bi)
      for (Index bj = 0; bj < d; ++bj) out(alpha, base + bi * si + bj * sj) = w(ai * d + aj, bi * d + bj);
  }
  return out;
}

CMatrix antisymmetrizer(Index d, int n_slots) {
  if (n_slots < 1) throw InvalidArgument("antisymmetrizer: need at least one slot");
  const Index dim = static_cast<Index>(ipow(d, n_slots));
  std::vector<std::vector<Index>> tuples;
  std::vector<Index> cur(static_cast<size_t>(n_slots));
  // Increasing tuples in lexicographic order.
  std::function<void(int, Index)> rec = [&](int pos, Index start) {
    if (pos == n_slots) {
      tuples.push_back(cur);
      return;
    }
    for (Index v = start; v < d; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
  CMatrix a = CMatrix::Zero(dim, static_cast<Index>(tuples.size()));
  std::vector<int> perm(static_cast<size_t>(n_slots));
  double fact = 1.0;
  for (int k = 2; k <= n_slots; ++k) fact *= k;
  const double norm = 1.0 / std::sqrt(fact);
  for (size_t c = 0; c < tuples.size(); ++c) {
    for (int k = 0; k < n_slots; ++k) perm[static_cast<size_t>(k)] = k;
    do {
      int inversions = 0;
      for (int x = 0; x < n_slots; ++x)
        for (int y = x + 1; y < n_slots; ++y)
          if (perm[static_cast<size_t>(x)] > perm[static_cast<size_t>(y)]) ++inversions;
      Index idx = 0;
      for (int k = 0; k < n_slots; ++k) idx = idx * d + tuples[c][static_cast<size_t>(perm[static_cast<size_t>(k)])];
      a(idx, static_cast<Index>(c)) = (inversions % 2 == 0 ? norm : -norm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return a;
}

CMatrix swap_operator(Index d) {
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return s;
}

FurrySystem assemble_furry_exact(const OneParticleSystem& sys, const FurryConfig& cfg,
                                 std::shared_ptr<const PairInteraction> w) {
  validate_config(sys, cfg);
  const int n_particles = cfg.n_particles;
  if (n_particles >= 2 && !w) throw InvalidArgument("furry: pair interaction required for N >= 2");
  if (w && w->grid().size() != sys.grid.size()) throw InvalidArgument("furry: pair interaction built on another grid");

  FurrySystem fs;
  fs.one_particle = sys;
  fs.config = cfg;
  fs.pair = w;
  const Index d = cfg.n_plus;
  fs.furry_basis = sys.eigenvectors.middleCols(sys.first_positive, d);
  fs.energies = sys.eigenvalues.segment(sys.first_positive, d);
  fs.fw_basis = sys.u_fw * sys.u_gamma * fs.furry_basis;
  fs.interaction_scale = sys.gamma / cfg.z_charge;
  if (cfg.antisymmetrize && n_particles >= 2) fs.antisym = antisymmetrizer(d, n_particles);

  // Furry frame.
  const CMatrix eps = fs.energies.cast<Complex>().asDiagonal();
  CMatrix kin = tensor_sum(eps, n_particles);
  CMatrix inter = CMatrix::Zero(kin.rows(), kin.cols());
  if (n_particles >= 2) {
    fs.w_matrix = w->interaction_matrix(fs.furry_basis);
    inter = fs.interaction_scale * pair_sum(fs.w_matrix, n_particles, d);
  }
  fs.kinetic = compress(kin, fs.antisym);
  fs.interaction = compress(inter, fs.antisym);
  fs.h_furry_exact = fs.kinetic + fs.interaction;

  // Decoupled frame: U_FW U P (.) P U* U_FW* seen through B.
  const CMatrix hd1 = exact_h_diag(sys);
  CMatrix kin_d = tensor_sum(fs.fw_basis.adjoint() * hd1 * fs.fw_basis, n_particles);
  CMatrix inter_d = CMatrix::Zero(kin_d.rows(), kin_d.cols());
  if (n_particles >= 2) {
    const CMatrix psi = sys.p_plus_gamma * sys.u_gamma.adjoint() * sys.u_fw.adjoint() * fs.fw_basis;
    inter_d = fs.interaction_scale * pair_sum(w->interaction_matrix(psi), n_particles, d);
  }
  fs.h_diag_exact = compress(kin_d + inter_d, fs.antisym);

  const CMatrix abs_d0 = abs_free_dirac_power(sys.grid, 1.0);
  fs.free_projected = compress(tensor_sum(fs.furry_basis.adjoint() * abs_d0 * fs.furry_basis, n_particles), fs.antisym);

  const CMatrix m = compress(free_inverse_weight(fs.fw_basis, interleaved_energies(sys.grid), n_particles), fs.antisym);
  fs.d0_sum_half_neg = hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
  return fs;
}

MatrixSeries assemble_h_diag_series_N(const DecouplingBundle& bundle, FurrySystem& fs) {
  const OneParticleSystem& sys = fs.one_particle;
  const int k = bundle.h_diag_series.order();
  const int n_particles = fs.config.n_particles;
  const Index d = fs.config.n_plus;
  if (bundle.h_diag_series.dim() != sys.dim()) throw InvalidArgument("furry series: bundle built on another grid");
  const CMatrix& b = fs.fw_basis;

  std::vector<CMatrix> coeffs;
  coeffs.reserve(static_cast<size_t>(k + 1));
  for (int m = 0; m <= k; ++m) {
    const CMatrix k1 = b.adjoint() * bundle.h_diag_series[m] * b;
    coeffs.push_back(tensor_sum(k1, n_particles));
  }

  if (n_particles >= 2 && k >= 1) {
    // Psi(gamma) = P(gamma) U(gamma)^* U_FW^* B, order by order.
    const CMatrix y0 = sys.u_fw.adjoint() * b;
    std::vector<CMatrix> y(static_cast<size_t>(k + 1)), psi(static_cast<size_t>(k + 1));
    for (int j = 0; j <= k; ++j) y[static_cast<size_t>(j)] = bundle.u_series[j].adjoint() * y0;
    for (int m = 0; m <= k; ++m) {
      CMatrix acc = CMatrix::Zero(b.rows(), d);
      for (int i = 0; i <= m; ++i) acc.noalias() += bundle.p_series[i] * y[static_cast<size_t>(m - i)];
      psi[static_cast<size_t>(m)] = acc;
    }
    std::vector<CMatrix> g(static_cast<size_t>(k + 1)), f(static_cast<size_t>(k + 1));
    for (int m = 0; m <= k; ++m) fs.pair->radial_components(psi[static_cast<size_t>(m)], g[static_cast<size_t>(m)], f[static_cast<size_t>(m)]);
    // Only orders up to k - 1 survive the gamma/Z shift.
    const int top = k - 1;
    std::vector<CMatrix> rho(static_cast<size_t>(top + 1)), krho(static_cast<size_t>(top + 1));
    for (int m = 0; m <= top; ++m) {
      CMatrix acc;
      for (int i = 0; i <= m; ++i) {
        const CMatrix part = PairInteraction::pair_densities(g[static_cast<size_t>(i)], f[static_cast<size_t>(i)],
                                                             g[static_cast<size_t>(m - i)], f[static_cast<size_t>(m - i)]);
        if (i == 0) acc = part;
        else acc += part;
      }
      rho[static_cast<size_t>(m)] = acc;
      krho[static_cast<size_t>(m)] = fs.pair->kernel().cast<Complex>() * acc;
    }
    const double inv_z = 1.0 / fs.config.z_charge;
    for (int m = 0; m <= top; ++m) {
      CMatrix t = CMatrix::Zero(d * d, d * d);
      for (int i = 0; i <= m; ++i) t.noalias() += rho[static_cast<size_t>(i)].transpose() * krho[static_cast<size_t>(m - i)];
      const CMatrix wm = PairInteraction::pair_matrix_from_form(t, d);
      coeffs[static_cast<size_t>(m + 1)] += inv_z * pair_sum(wm, n_particles, d);
    }
    fs.warnings.push_back("interaction coefficient of order " + std::to_string(k) +
                          " falls beyond the series order after the gamma/Z shift and is not represented");
  }

  for (auto& c : coeffs) c = compress(c, fs.antisym);
  return MatrixSeries(std::move(coeffs));
}

FurrySystem build_furry_system(const OneParticleSystem& sys, const DecouplingBundle& bundle, const FurryConfig& cfg,
                               std::shared_ptr<const PairInteraction> w) {
  FurrySystem fs = assemble_furry_exact(sys, cfg, std::move(w));
  fs.h_diag_series_N = assemble_h_diag_series_N(bundle, fs);
  return fs;
}

CMatrix h_diag_full_space(const FurrySystem& fs) {
  const OneParticleSystem& sys = fs.one_particle;
  const int n_particles = fs.config.n_particles;
  const Index dim1 = sys.dim();
  const long long full = ipow(dim1, n_particles);
  if (full > 4096) throw InvalidArgument("h_diag_full_space: full tensor space too large");
  const CMatrix p = sys.p_plus_gamma;
  CMatrix h = tensor_sum(p * sys.dgamma * p, n_particles);
  if (n_particles >= 2) {
    const CMatrix wf = fs.pair->interaction_matrix(CMatrix::Identity(dim1, dim1));
    const CMatrix pp = kron_power(p, n_particles);
    h += fs.interaction_scale * pp * pair_sum(wf, n_particles, dim1) * pp;
  }
  const CMatrix u = kron_power(sys.u_fw * sys.u_gamma, n_particles);
  const CMatrix conj = u * h * u.adjoint();
  const CMatrix bn = kron_power(fs.fw_basis, n_particles);
  return compress(bn.adjoint() * conj * bn, fs.antisym);
}

double form_bound_constant(const FurrySystem& fs) {
  const double n = fs.config.n_particles;
  return fs.gamma() * std::numbers::pi * n * (n - 1.0) / (4.0 * fs.config.z_charge * d_gamma(fs.gamma()));
}

double check_form_bound(const FurrySystem& fs) {
  const CMatrix t_inv_half = hermitian_function(fs.kinetic, [](double x) {
    if (!(x > 0.0)) throw NumericalError("check_form_bound: kinetic part not positive definite");
    return 1.0 / std::sqrt(x);
  });
  return max_eigenvalue(t_inv_half * fs.interaction * t_inv_half);
}

double check_kinetic_weight_bound(const FurrySystem& fs) {
  const CMatrix h_inv_half = hermitian_function(fs.h_furry_exact, [](double x) {
    if (!(x > 0.0)) throw NumericalError("check_kinetic_weight_bound: Hamiltonian not positive definite");
    return 1.0 / std::sqrt(x);
  });
  return max_eigenvalue(h_inv_half * fs.free_projected * h_inv_half);
}

RVector lowest_eigenvalues(const CMatrix& h, Index count) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return es.eigenvalues().head(std::min(count, h.rows()));
}

ConvergenceReport converge_main_theorem(const std::vector<const FurrySystem*>& systems, int k_max) {
  ConvergenceReport rep;
  for (const FurrySystem* fs : systems) {
    if (fs->h_diag_series_N.order() < k_max)
      throw InvalidArgument("converge_main_theorem: series order below k_max");
    const double gamma = fs->gamma();
    const CMatrix& exact = fs->h_diag_exact;
    const RVector exact_eigs = lowest_eigenvalues(exact, 10);
    std::vector<ReportRow> rows;
    std::vector<double> dist;
    for (int k = 0; k <= k_max; ++k) {
      const CMatrix approx = gamma == 0.0 ? CMatrix(fs->h_diag_series_N[0])
                                          : series_eval(fs->h_diag_series_N.truncated(k), gamma);
      ReportRow row;
      row.gamma = gamma;
      row.k = k;
      row.resolvent_distance = resolvent_distance(exact, approx);
      row.weighted_remainder_norm = spectral_norm(fs->d0_sum_half_neg * (exact - approx) * fs->d0_sum_half_neg);
      row.max_eigval_error = (lowest_eigenvalues(approx, 10) - exact_eigs).cwiseAbs().maxCoeff();
      dist.push_back(row.resolvent_distance);
      rows.push_back(row);
    }
    const double ratio = fit_geometric(dist, kDistanceFloor).ratio;
    for (auto& r : rows) {
      r.fitted_ratio = ratio;
      rep.rows.push_back(r);
    }
  }
  rep.sort_rows();
  rep.validate();
  if (!systems.empty()) {
    const FurrySystem& f = *systems.front();
    rep.meta.grid_size = f.one_particle.grid.size();
    rep.meta.n_plus = f.config.n_plus;
    rep.meta.n_particles = f.config.n_particles;
  }
  return rep;
}

}  // namespace furry
