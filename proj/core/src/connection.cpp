#include <algorithm>
#include <cmath>
#include <string>

#include "srcartan/connection.hpp"
#include "srcartan/errors.hpp"

namespace srcartan {

namespace {

// Derivative of sigma(exp tX) at t = 0: (X.T)(u, w) = -X T(u, w) + T(Xu, w) + T(u, Xw).
QHom2 infinitesimal_action(const QMatrix& x, const QHom2& t) {
  const std::size_t dim = t.dim();
  QHom2 out(t.n());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        Rational s = 0;
        for (std::size_t a = 0; a < dim; ++a) {
          if (x(k, a) != 0) s -= x(k, a) * t.get(a, i, j);
          if (x(a, i) != 0) s += x(a, i) * t.get(k, a, j);
          if (x(a, j) != 0) s += x(a, j) * t.get(k, i, a);
        }
        out.set(k, i, j, s);
      }
    }
  }
  return out;
}

Eigen::MatrixXd lie_matrix(const std::vector<Eigen::MatrixXd>& basis, const Eigen::VectorXd& coords) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t a = 0; a < basis.size(); ++a) out += coords(static_cast<Eigen::Index>(a)) * basis[a];
  return out;
}

std::vector<Eigen::MatrixXd> double_basis(const LieAlgebraModel& algebra) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& b : algebra.basis) out.push_back(b.to_double());
  return out;
}

// Least-squares coordinates of gl(V) matrices on the g2 basis.
struct Projector {
  Eigen::MatrixXd basis_flat;  // dim^2 x dim(g2)
  Eigen::MatrixXd pinv;
};

Projector make_projector(const std::vector<Eigen::MatrixXd>& basis) {
  const Eigen::Index rows = basis.front().size();
  Projector p;
  p.basis_flat.resize(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    p.basis_flat.col(static_cast<Eigen::Index>(a)) = basis[a].reshaped();
  }
  p.pinv = (p.basis_flat.transpose() * p.basis_flat).inverse() * p.basis_flat.transpose();
  return p;
}

Curvature project(const ComplementModel& model, std::vector<Eigen::MatrixXd> matrices) {
  const auto basis = double_basis(model.algebra);
  const Projector proj = make_projector(basis);
  Curvature out;
  out.components.resize(static_cast<Eigen::Index>(matrices.size()),
                        static_cast<Eigen::Index>(basis.size()));
  for (std::size_t p = 0; p < matrices.size(); ++p) {
    const Eigen::VectorXd flat = matrices[p].reshaped();
    const Eigen::VectorXd coords = proj.pinv * flat;
    out.components.row(static_cast<Eigen::Index>(p)) = coords.transpose();
    out.projection_residual =
        std::max(out.projection_residual, (proj.basis_flat * coords - flat).cwiseAbs().maxCoeff());
  }
  out.matrices = std::move(matrices);
  return out;
}

}  // namespace

ComplementModel invariant_complement(int n) {
  ComplementModel m;
  m.n = n;
  m.algebra = build_lie_algebra(n, Level::kG2);
  const QMatrix a = amap_matrix(m.algebra);
  m.image = linalg::column_space(a);
  if (m.image.dim() != a.cols()) {
    throw InternalConsistencyError("A is not injective on Hom(V, g2)");
  }
  m.complement = linalg::orthogonal_complement(m.image, QMatrix::identity(hom2_dim(n)));

  std::vector<QVector> cols;
  for (std::size_t c = 0; c < a.cols(); ++c) cols.push_back(a.column(c));
  for (const auto& v : m.complement.basis()) cols.push_back(v);
  const auto inv = linalg::inverse(QMatrix::from_columns(cols, hom2_dim(n)));
  if (!inv) throw InternalConsistencyError("complement does not split Hom(V^V, V)");
  m.splitting = *inv;
  m.splitting_d = inv->to_double();
  return m;
}

bool is_infinitesimally_invariant(const ComplementModel& model) {
  for (const auto& x : model.algebra.basis) {
    for (const auto& v : model.complement.basis()) {
      if (!model.complement.contains(infinitesimal_action(x, QHom2(model.n, v)).flat())) {
        return false;
      }
    }
  }
  return true;
}

bool is_invariant_under(const ComplementModel& model, const QMatrix& g) {
  for (const auto& v : model.complement.basis()) {
    if (!model.complement.contains(sigma_action(g, QHom2(model.n, v)).flat())) return false;
  }
  return true;
}

Connection canonical_connection(const ComplementModel& model,
                                const std::vector<Eigen::MatrixXd>& c) {
  const int n = model.n;
  const std::size_t dim = model_dim(n);
  const std::size_t g = model.algebra.dim();
  const Eigen::VectorXd flat = flatten(n, c);
  const Eigen::VectorXd coords = model.splitting_d * flat;
  const auto gd = static_cast<Eigen::Index>(model.gamma_dim());

  Connection out;
  out.gamma.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(g));
  const auto basis = double_basis(model.algebra);
  for (std::size_t s = 0; s < dim; ++s) {
    const Eigen::VectorXd gs = coords.segment(static_cast<Eigen::Index>(s * g), static_cast<Eigen::Index>(g));
    out.gamma.row(static_cast<Eigen::Index>(s)) = gs.transpose();
    out.matrices.push_back(lie_matrix(basis, gs));
  }
  const Eigen::VectorXd torsion = flat - flatten(n, amap(n, out.matrices));
  out.torsion = unflatten(n, torsion);
  // Torsion must lie in C: its A-coordinates vanish.
  const Eigen::VectorXd t_coords = model.splitting_d * torsion;
  out.residual = t_coords.head(gd).cwiseAbs().maxCoeff();
  if (!(out.residual <= 1e-8 * std::max(1.0, flat.cwiseAbs().maxCoeff()))) {
    throw InternalConsistencyError("torsion leaves the invariant complement (residual " +
                                   std::to_string(out.residual) + ")");
  }
  return out;
}

Curvature constant_curvature(const ComplementModel& model, const Connection& conn,
                             const std::vector<Eigen::MatrixXd>& c) {
  const std::size_t dim = model_dim(model.n);
  std::vector<Eigen::MatrixXd> matrices;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      Eigen::MatrixXd r = conn.matrices[i] * conn.matrices[j] - conn.matrices[j] * conn.matrices[i];
      for (std::size_t s = 0; s < dim; ++s) {
        r -= c[s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * conn.matrices[s];
      }
      matrices.push_back(std::move(r));
    }
  }
  return project(model, std::move(matrices));
}

Curvature curvature(GaugeContext& ctx, const ComplementModel& model) {
  const std::size_t dim = model_dim(model.n);
  const auto d = static_cast<Eigen::Index>(dim);
  const double h = ctx.step();

  // omega_mu as gl(V) matrices at a lattice point.
  auto omega = [&](const GaugeContext::Offset& off) {
    const auto& red = ctx.reduced(off);
    const Connection conn = canonical_connection(model, red.c);
    std::vector<Eigen::MatrixXd> w(dim, Eigen::MatrixXd::Zero(d, d));
    for (std::size_t mu = 0; mu < dim; ++mu) {
      for (std::size_t s = 0; s < dim; ++s) {
        w[mu] -= red.coframe(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(mu)) *
                 conn.matrices[s];
      }
    }
    return w;
  };

  const GaugeContext::Offset zero(dim, 0);
  const auto w0 = omega(zero);
  // dw[mu][nu] = d_mu omega_nu
  std::vector<std::vector<Eigen::MatrixXd>> dw(dim);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    GaugeContext::Offset plus = zero, minus = zero;
    plus[mu] = 1;
    minus[mu] = -1;
    const auto wp = omega(plus);
    const auto wm = omega(minus);
    for (std::size_t nu = 0; nu < dim; ++nu) dw[mu].push_back((wp[nu] - wm[nu]) / (2 * h));
  }

  const Eigen::MatrixXd frame = ctx.reduced(zero).coframe.inverse();
  std::vector<Eigen::MatrixXd> coord(dim * dim, Eigen::MatrixXd::Zero(d, d));
  for (std::size_t mu = 0; mu < dim; ++mu) {
    for (std::size_t nu = 0; nu < dim; ++nu) {
      if (mu == nu) continue;
      coord[mu * dim + nu] = dw[mu][nu] - dw[nu][mu] + w0[mu] * w0[nu] - w0[nu] * w0[mu];
    }
  }
  std::vector<Eigen::MatrixXd> matrices;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t mu = 0; mu < dim; ++mu) {
        for (std::size_t nu = 0; nu < dim; ++nu) {
          const double f = frame(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(i)) *
                           frame(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(j));
          if (f != 0.0) r += f * coord[mu * dim + nu];
        }
      }
      matrices.push_back(std::move(r));
    }
  }
  return project(model, std::move(matrices));
}

PointInvariants point_invariants(const Reducer& reducer, const ComplementModel& model,
                                 std::span<const double> point) {
  GaugeContext ctx(reducer, {point.begin(), point.end()});
  PointInvariants out;
  out.reduction = reducer.reduce(ctx);
  out.connection = canonical_connection(model, out.reduction.c);
  out.curvature = curvature(ctx, model);
  return out;
}

SymbolicConnectionN1 symbolic_connection_n1(const SymbolicReductionN1& red,
                                            const ComplementModel& model) {
  if (model.n != 1 || model.algebra.dim() != 1) {
    throw std::invalid_argument("symbolic_connection_n1: needs the n = 1 model");
  }
  SymbolicConnectionN1 out;
  const std::size_t total = hom2_dim(1);
  for (std::size_t s = 0; s < 3; ++s) {
    sym::Expr g;
    for (std::size_t f = 0; f < total; ++f) {
      const Rational& w = model.splitting(s, f);
      if (w == 0 || red.c[f].is_zero()) continue;
      g = g + sym::Expr(w) * red.c[f];
    }
    out.gamma.push_back(g);
  }
  sym::OneForm omega(3);
  for (std::size_t s = 0; s < 3; ++s) {
    if (out.gamma[s].is_zero()) continue;
    omega = omega - out.gamma[s] * red.coframe[s];
  }
  out.curvature = sym::exterior_d(omega);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      out.curvature_frame.push_back(pair(out.curvature, red.frame[i], red.frame[j]));
    }
  }
  return out;
}

}  // namespace srcartan
