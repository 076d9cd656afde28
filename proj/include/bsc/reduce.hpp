#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "bsc/clique.hpp"
#include "bsc/types.hpp"

namespace bsc {

// Binary clique-word membership matrix. Rows follow clique order, columns
// are the distinct member words in ascending node-id order. Every row has
// >= 2 ones (clique size), every column >= 1 (absent words get no column).
struct IncidenceMatrix {
  std::vector<uint32_t> words;                // column -> node id
  std::vector<std::vector<uint32_t>> rows;    // per row: sorted column indices

  size_t row_count() const { return rows.size(); }
  size_t col_count() const { return words.size(); }
  Eigen::MatrixXd dense() const;
};

IncidenceMatrix build_incidence(std::span<const SenseClique> cliques,
                                const Vocabulary& vocab);

enum class ReduceMethod { pca, ca };

// d-dimensional coordinates for the words (and cliques) of one incidence
// matrix. `dim` is the effective dimension: degenerate axes (zero
// eigenvalue / singular value) are dropped and `truncated` is set when the
// requested dimension could not be met.
struct LocalEmbedding {
  ReduceMethod method = ReduceMethod::ca;
  size_t dim = 0;
  bool truncated = false;
  std::vector<uint32_t> words;     // node ids, ascending (incidence columns)
  Eigen::MatrixXd word_coords;     // words.size() x dim
  Eigen::MatrixXd clique_coords;   // rows x dim
  Eigen::VectorXd axis_importance; // dim entries, non-increasing
  double total_inertia = 0.0;      // CA only: sum of all squared singular values

  // Row of word_coords for a node id, or -1.
  int64_t word_row(uint32_t id) const;
};

// Principal component analysis of the incidence matrix. Rows are centered
// to zero mean, S = X X^T is eigendecomposed, and word coordinates are the
// columns of the top-d projection of X. axis_importance holds eigenvalues
// of S/(cols-1). Throws dimension_too_large when d > min(rows, cols).
LocalEmbedding pca_reduce(const IncidenceMatrix& m, size_t d);

// Correspondence analysis: SVD of the standardized residuals of X/N, with
// principal row coordinates Dr^{-1/2} U S and column coordinates
// Dc^{-1/2} V S. axis_importance holds squared singular values (principal
// inertias); total_inertia equals chi^2/N of the table.
LocalEmbedding ca_reduce(const IncidenceMatrix& m, size_t d);

// Full local pipeline for one query word: subgraph extraction, clique
// enumeration, incidence construction, reduction. The requested dimension
// is clamped to min(rows, cols) of the incidence (with `truncated` set) so
// degenerate neighborhoods embed instead of failing. Throws no_cliques for
// isolated words.
LocalEmbedding embed_word_locally(const BilingualGraph& g,
                                  const Vocabulary& vocab, uint32_t focus,
                                  ReduceMethod method, size_t d,
                                  uint64_t budget = kDefaultFocusCliqueBudget);

// PCA of a point cloud (rows = points) onto its top-2 axes; used for 2-D
// dumps of externally trained vectors.
Eigen::MatrixXd pca_2d_points(const Eigen::MatrixXd& points);

}  // namespace bsc
