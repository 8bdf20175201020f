#include "graphimpute/operators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "graphimpute/error.hpp"

namespace graphimpute {

namespace {

void require_binary(const ItemGraph& g) {
  if (g.kind() != GraphKind::Binary) {
    throw Error(ErrorKind::InvalidParameter, "diffusion operators need a Binary item graph");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1], got " << alpha;
    throw Error(ErrorKind::InvalidParameter, msg.str());
  }
}

std::vector<std::size_t> degrees_of(const ItemGraph& g) {
  std::vector<std::size_t> d(g.n_items());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.degree(static_cast<Index>(i));
  return d;
}

// Same expression for (i,j) and (j,i) so the operator is exactly symmetric.
double sym_weight(std::size_t di, std::size_t dj) {
  return 1.0 / (std::sqrt(static_cast<double>(di)) * std::sqrt(static_cast<double>(dj)));
}

SparseOperator normalized(const ItemGraph& g, bool self_loops) {
  const auto d = degrees_of(g);
  SparseOperator op;
  op.n = g.n_items();
  op.offsets.assign(op.n + 1, 0);
  for (std::size_t i = 0; i < op.n; ++i) {
    const auto row = g.neighbors(static_cast<Index>(i));
    bool diag_done = !self_loops || d[i] == 0;
    for (Index j : row) {
      if (!diag_done && j > i) {
        op.columns.push_back(static_cast<Index>(i));
        op.values.push_back(1.0 / static_cast<double>(d[i]));
        diag_done = true;
      }
      op.columns.push_back(j);
      op.values.push_back(sym_weight(d[i], d[j]));
    }
    if (!diag_done) {
      op.columns.push_back(static_cast<Index>(i));
      op.values.push_back(1.0 / static_cast<double>(d[i]));
    }
    op.offsets[i + 1] = op.columns.size();
  }
  return op;
}

}  // namespace

NormalizedOperator::NormalizedOperator(OperatorMode mode, double alpha, SparseOperator sparse,
                                       std::vector<double> dense,
                                       std::vector<std::size_t> degrees)
    : mode_(mode),
      alpha_(alpha),
      sparse_(std::move(sparse)),
      dense_(std::move(dense)),
      degrees_(std::move(degrees)) {}

NormalizedOperator sym_norm_adjacency(const ItemGraph& g) {
  require_binary(g);
  return NormalizedOperator(OperatorMode::SymLaplacian, 1.0, normalized(g, false), {},
                            degrees_of(g));
}

NormalizedOperator self_loop_adjacency(const ItemGraph& g, double alpha) {
  require_binary(g);
  require_alpha(alpha);
  return NormalizedOperator(OperatorMode::PprIterative, alpha, normalized(g, true), {},
                            degrees_of(g));
}

std::vector<double> ppr_system_matrix(const ItemGraph& g, double alpha) {
  require_binary(g);
  const std::size_t n = g.n_items();
  const auto d = degrees_of(g);
  std::vector<double> b(n * n, 0.0);
  const double damp = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    b[i * n + i] = d[i] == 0 ? 1.0 : 1.0 - damp / static_cast<double>(d[i]);
    for (Index j : g.neighbors(static_cast<Index>(i))) {
      b[i * n + j] = -damp * sym_weight(d[i], d[j]);
    }
  }
  return b;
}

NormalizedOperator ppr_exact(const ItemGraph& g, double alpha, std::size_t max_items) {
  require_binary(g);
  require_alpha(alpha);
  const std::size_t n = g.n_items();
  if (n > max_items) {
    throw Error(ErrorKind::GraphTooLarge,
                "exact personalized PageRank is limited to " + std::to_string(max_items) +
                    " items (graph has " + std::to_string(n) + "); use iterative mode");
  }

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto b_values = ppr_system_matrix(g, alpha);
  const Eigen::Map<const RowMatrix> b(b_values.data(), static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(n));

  auto singular = [&](double rcond) {
    std::ostringstream msg;
    msg << "B is singular or ill-conditioned at alpha = " << alpha
        << " (reciprocal condition estimate " << rcond << ")";
    return Error(ErrorKind::SingularDiffusion, msg.str());
  };

  std::vector<double> dense(n * n, 0.0);
  if (n > 0) {
    Eigen::PartialPivLU<RowMatrix> lu(b);
    const auto& u = lu.matrixLU();
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
      if (u(k, k) == 0.0) throw singular(0.0);
    }
    const double rcond = lu.rcond();
    if (!(rcond >= 1.0 / kMaxConditionEstimate)) throw singular(rcond);

    RowMatrix inv = lu.solve(RowMatrix::Identity(b.rows(), b.cols()));
    inv *= alpha;
    if (!inv.allFinite()) throw singular(rcond);
    Eigen::Map<RowMatrix>(dense.data(), b.rows(), b.cols()) = inv;
  }
  return NormalizedOperator(OperatorMode::PprExact, alpha, {}, std::move(dense),
                            degrees_of(g));
}

}  // namespace graphimpute
