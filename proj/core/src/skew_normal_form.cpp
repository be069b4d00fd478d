#include <algorithm>
#include <cmath>
#include <sstream>

#include "srcartan/errors.hpp"
#include "srcartan/exact_linalg.hpp"

namespace srcartan::linalg {

Eigen::MatrixXd skew_block_form(std::span<const double> lambdas) {
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(2 * k, 2 * k + 1) = lambdas[static_cast<std::size_t>(k)];
    out(2 * k + 1, 2 * k) = -lambdas[static_cast<std::size_t>(k)];
  }
  return out;
}

// Eigen-decomposition of omega^T omega, whose spectrum is l_i^2 with
// multiplicity two. Inside each cluster of (numerically) equal l_i the
// 2-planes are built one at a time: the first vector is the normalised
// projection of the earliest standard basis vector with a large enough
// residual, the second is omega^T p1 / l. The first vector is then flipped to
// have a positive leading entry. An input already in normal form returns P = I.
SkewNormalForm skew_normal_form(const Eigen::MatrixXd& omega, double tol) {
  const Eigen::Index dim = omega.rows();
  if (dim != omega.cols() || dim % 2 != 0) {
    throw std::invalid_argument("skew_normal_form: omega must be square of even size");
  }
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, omega.norm())) {
    throw std::invalid_argument("skew_normal_form: omega is not antisymmetric");
  }
  const Eigen::MatrixXd gram = omega.transpose() * omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw InternalConsistencyError("skew_normal_form: eigen-decomposition failed");
  }
  // Descending order.
  Eigen::VectorXd values = eig.eigenvalues().reverse();
  Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();

  const double smallest = std::sqrt(std::max(0.0, values(dim - 1)));
  if (smallest < tol) {
    std::ostringstream msg;
    msg << "skew form is degenerate: smallest block scalar " << smallest << " below tolerance "
        << tol;
    throw ContactDegeneracy(msg.str());
  }

  SkewNormalForm out;
  out.basis = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index filled = 0;
  Eigen::Index start = 0;
  const double scale = std::max(1.0, values(0));
  while (start < dim) {
    Eigen::Index stop = start + 1;
    while (stop < dim && std::abs(values(stop) - values(start)) <= kClusterTolerance * scale) {
      ++stop;
    }
    Eigen::Index size = stop - start;
    if (size % 2 != 0) {
      // Pairs split by noise at the cluster boundary; absorb the partner.
      if (stop < dim) {
        ++stop;
        ++size;
      } else {
        throw InternalConsistencyError("skew_normal_form: odd eigenvalue multiplicity");
      }
    }
    const double lambda = std::sqrt(values.segment(start, size).mean());
    const Eigen::MatrixXd space = vectors.middleCols(start, size);
    for (Eigen::Index pair = 0; pair < size / 2; ++pair) {
      Eigen::MatrixXd residuals(dim, dim);
      Eigen::VectorXd norms(dim);
      for (Eigen::Index k = 0; k < dim; ++k) {
        Eigen::VectorXd r = space * space.row(k).transpose();
        for (Eigen::Index j = 0; j < filled; ++j) {
          r -= out.basis.col(j).dot(r) * out.basis.col(j);
        }
        residuals.col(k) = r;
        norms(k) = r.norm();
      }
      const double best = norms.maxCoeff();
      Eigen::Index pick = 0;
      while (norms(pick) < 0.5 * best) ++pick;
      Eigen::VectorXd p1 = residuals.col(pick) / norms(pick);
      for (Eigen::Index k = 0; k < dim; ++k) {
        if (std::abs(p1(k)) > 1e-12) {
          if (p1(k) < 0) p1 = -p1;
          break;
        }
      }
      Eigen::VectorXd p2 = omega.transpose() * p1 / lambda;
      for (Eigen::Index j = 0; j < filled; ++j) p2 -= out.basis.col(j).dot(p2) * out.basis.col(j);
      p2 -= p1.dot(p2) * p1;
      p2.normalize();
      out.basis.col(filled++) = p1;
      out.basis.col(filled++) = p2;
    }
    for (Eigen::Index k = 0; k < size / 2; ++k) {
      // Block scalar read back from the constructed pair keeps P^T omega P exact
      // to rounding even when the cluster mean is slightly off.
      const Eigen::Index c = filled - size + 2 * k;
      out.lambdas.push_back(out.basis.col(c).dot(omega * out.basis.col(c + 1)));
    }
    out.clusters.push_back(static_cast<int>(size / 2));
    start = stop;
  }
  return out;
}

}  // namespace srcartan::linalg
