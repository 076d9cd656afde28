#include "bsc/reduce.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "bsc/errors.hpp"

namespace bsc {

namespace {

constexpr double kRankTol = 1e-10;   // relative to the largest axis
constexpr double kSignTol = 1e-12;   // relative to the largest entry

// Canonical sign: first entry that is nonzero (relative to the vector's
// largest magnitude) is made non-negative. Returns -1.0 when a flip is
// needed so paired factors can flip together.
double sign_for(const Eigen::VectorXd& v) {
  double maxabs = v.cwiseAbs().maxCoeff();
  if (maxabs == 0.0) return 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kSignTol * maxabs) return v[i] < 0.0 ? -1.0 : 1.0;
  }
  return 1.0;
}

}  // namespace

Eigen::MatrixXd IncidenceMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(rows.size()),
      static_cast<Eigen::Index>(words.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (uint32_t c : rows[r]) m(static_cast<Eigen::Index>(r), c) = 1.0;
  return m;
}

IncidenceMatrix build_incidence(std::span<const SenseClique> cliques,
                                const Vocabulary& vocab) {
  if (cliques.empty())
    throw empty_clique_set("cannot build an incidence matrix from zero cliques");

  IncidenceMatrix m;
  for (const auto& c : cliques)
    m.words.insert(m.words.end(), c.nodes.begin(), c.nodes.end());
  std::sort(m.words.begin(), m.words.end());
  m.words.erase(std::unique(m.words.begin(), m.words.end()), m.words.end());
  if (!m.words.empty() && m.words.back() >= vocab.size())
    throw std::out_of_range("clique node id exceeds vocabulary");

  m.rows.reserve(cliques.size());
  for (const auto& c : cliques) {
    std::vector<uint32_t> row;
    row.reserve(c.nodes.size());
    for (uint32_t id : c.nodes) {
      auto it = std::lower_bound(m.words.begin(), m.words.end(), id);
      row.push_back(static_cast<uint32_t>(it - m.words.begin()));
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

int64_t LocalEmbedding::word_row(uint32_t id) const {
  auto it = std::lower_bound(words.begin(), words.end(), id);
  if (it == words.end() || *it != id) return -1;
  return it - words.begin();
}

LocalEmbedding pca_reduce(const IncidenceMatrix& m, size_t d) {
  size_t rows = m.row_count(), cols = m.col_count();
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  if (d > std::min(rows, cols))
    throw dimension_too_large("requested dimension " + std::to_string(d) +
                              " exceeds min(" + std::to_string(rows) + ", " +
                              std::to_string(cols) + ")");

  Eigen::MatrixXd X = m.dense();
  Eigen::VectorXd row_mean = X.rowwise().mean();
  X.colwise() -= row_mean;

  Eigen::MatrixXd S = X * X.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw svd_nonconvergence("eigendecomposition did not converge");

  // Ascending from Eigen; walk from the back for descending eigenvalues.
  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = ev[static_cast<Eigen::Index>(rows) - 1];
  double tol = lmax > 0.0 ? kRankTol * lmax : 0.0;

  std::vector<Eigen::Index> kept;
  for (size_t k = 0; k < d; ++k) {
    Eigen::Index idx = static_cast<Eigen::Index>(rows - 1 - k);
    if (lmax <= 0.0 || ev[idx] <= tol) break;  // degenerate axis: stop
    kept.push_back(idx);
  }

  LocalEmbedding out;
  out.method = ReduceMethod::pca;
  out.dim = kept.size();
  out.truncated = kept.size() < d;
  out.words = m.words;
  out.word_coords.resize(static_cast<Eigen::Index>(cols),
                         static_cast<Eigen::Index>(kept.size()));
  out.clique_coords.resize(static_cast<Eigen::Index>(rows),
                           static_cast<Eigen::Index>(kept.size()));
  out.axis_importance.resize(static_cast<Eigen::Index>(kept.size()));

  for (size_t k = 0; k < kept.size(); ++k) {
    Eigen::VectorXd e = es.eigenvectors().col(kept[k]);
    e *= sign_for(e);
    double lambda = ev[kept[k]];
    out.word_coords.col(static_cast<Eigen::Index>(k)) = X.transpose() * e;
    out.clique_coords.col(static_cast<Eigen::Index>(k)) =
        e * std::sqrt(lambda);
    out.axis_importance[static_cast<Eigen::Index>(k)] =
        lambda / static_cast<double>(cols - 1);
  }
  return out;
}

LocalEmbedding ca_reduce(const IncidenceMatrix& m, size_t d) {
  size_t rows = m.row_count(), cols = m.col_count();
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  if (d > std::min(rows, cols))
    throw dimension_too_large("requested dimension " + std::to_string(d) +
                              " exceeds min(" + std::to_string(rows) + ", " +
                              std::to_string(cols) + ")");

  Eigen::MatrixXd X = m.dense();
  double N = X.sum();
  Eigen::VectorXd R = X.rowwise().sum();
  Eigen::VectorXd C = X.colwise().sum();

  // Standardized residuals; exact zeros for tables with no association.
  Eigen::MatrixXd S(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      S(i, j) = (X(i, j) - R[i] * C[j] / N) / std::sqrt(R[i] * C[j]);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw svd_nonconvergence("singular value decomposition did not converge");

  const Eigen::VectorXd& sigma = svd.singularValues();
  double smax = sigma.size() ? sigma[0] : 0.0;
  double tol = smax > 0.0 ? kRankTol * smax : 0.0;

  size_t kept = 0;
  while (kept < d && sigma[static_cast<Eigen::Index>(kept)] > tol &&
         smax > 0.0)
    ++kept;

  LocalEmbedding out;
  out.method = ReduceMethod::ca;
  out.dim = kept;
  out.truncated = kept < d;
  out.words = m.words;
  out.total_inertia = S.squaredNorm();  // sum of all squared singular values
  out.word_coords.resize(static_cast<Eigen::Index>(cols),
                         static_cast<Eigen::Index>(kept));
  out.clique_coords.resize(static_cast<Eigen::Index>(rows),
                           static_cast<Eigen::Index>(kept));
  out.axis_importance.resize(static_cast<Eigen::Index>(kept));

  for (size_t k = 0; k < kept; ++k) {
    Eigen::Index kk = static_cast<Eigen::Index>(k);
    Eigen::VectorXd u = svd.matrixU().col(kk);
    Eigen::VectorXd v = svd.matrixV().col(kk);
    double s = sign_for(u);
    u *= s;
    v *= s;  // flips with u so S = U Sigma V^T is preserved
    double sig = sigma[kk];
    for (Eigen::Index i = 0; i < u.size(); ++i)
      out.clique_coords(i, kk) = u[i] * sig * std::sqrt(N / R[i]);
    for (Eigen::Index j = 0; j < v.size(); ++j)
      out.word_coords(j, kk) = v[j] * sig * std::sqrt(N / C[j]);
    out.axis_importance[kk] = sig * sig;
  }
  return out;
}

LocalEmbedding embed_word_locally(const BilingualGraph& g,
                                  const Vocabulary& vocab, uint32_t focus,
                                  ReduceMethod method, size_t d,
                                  uint64_t budget) {
  ExtractedSubgraph sub;
  try {
    sub = extract_subgraph(g, focus);
  } catch (const isolated_node&) {
    const Token& t = vocab.token(focus);
    throw no_cliques("no clique contains " + std::string(lang_name(t.lang)) +
                     ":" + t.surface + " (isolated in the graph)");
  }
  std::vector<SenseClique> cliques = maximal_cliques(sub, budget);
  IncidenceMatrix m = build_incidence(cliques, vocab);

  // Degenerate neighborhoods (e.g. a single 2-clique) cannot support the
  // requested dimension; clamp and mark instead of failing.
  size_t cap = std::min(m.row_count(), m.col_count());
  size_t d_eff = std::min(d, cap);
  LocalEmbedding out = method == ReduceMethod::pca ? pca_reduce(m, d_eff)
                                                   : ca_reduce(m, d_eff);
  if (d_eff < d) out.truncated = true;
  return out;
}

Eigen::MatrixXd pca_2d_points(const Eigen::MatrixXd& points) {
  Eigen::Index n = points.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, 2);
  if (n == 0 || points.cols() == 0) return out;

  Eigen::MatrixXd X = points.rowwise() - points.colwise().mean();
  Eigen::MatrixXd S = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw svd_nonconvergence("eigendecomposition did not converge");

  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = ev[ev.size() - 1];
  double tol = lmax > 0.0 ? kRankTol * lmax : 0.0;
  for (Eigen::Index k = 0; k < 2 && k < ev.size(); ++k) {
    Eigen::Index idx = ev.size() - 1 - k;
    if (lmax <= 0.0 || ev[idx] <= tol) break;
    Eigen::VectorXd e = es.eigenvectors().col(idx);
    e *= sign_for(e);
    out.col(k) = X * e;
  }
  return out;
}

}  // namespace bsc
