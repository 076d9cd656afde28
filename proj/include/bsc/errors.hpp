#pragma once

#include <stdexcept>
#include <string>

namespace bsc {

// Broad failure categories; the CLI maps these to exit codes
// (2 input-format, 3 empty-result, 4 unknown-query, 5 evaluation-impossible,
// 1 internal). Individual commands may override the mapping for
// query-context errors.
enum class errc {
  input_format,
  empty_result,
  unknown_query,
  eval_impossible,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

struct misaligned_corpus : error {
  explicit misaligned_corpus(const std::string& w)
      : error(errc::input_format, w) {}
};

struct empty_corpus : error {
  explicit empty_corpus(const std::string& w) : error(errc::input_format, w) {}
};

struct io_failure : error {
  explicit io_failure(const std::string& w) : error(errc::input_format, w) {}
};

struct all_tokens_pruned : error {
  explicit all_tokens_pruned(const std::string& w)
      : error(errc::empty_result, w) {}
};

struct zero_frequency : error {
  explicit zero_frequency(const std::string& w) : error(errc::internal, w) {}
};

struct isolated_node : error {
  explicit isolated_node(const std::string& w)
      : error(errc::unknown_query, w) {}
};

struct clique_budget_exceeded : error {
  explicit clique_budget_exceeded(const std::string& w)
      : error(errc::internal, w) {}
};

struct empty_clique_set : error {
  explicit empty_clique_set(const std::string& w)
      : error(errc::empty_result, w) {}
};

struct no_cliques : error {
  explicit no_cliques(const std::string& w) : error(errc::empty_result, w) {}
};

struct dimension_too_large : error {
  explicit dimension_too_large(const std::string& w)
      : error(errc::internal, w) {}
};

struct svd_nonconvergence : error {
  explicit svd_nonconvergence(const std::string& w)
      : error(errc::internal, w) {}
};

struct empty_training_set : error {
  explicit empty_training_set(const std::string& w)
      : error(errc::empty_result, w) {}
};

struct query_not_in_space : error {
  explicit query_not_in_space(const std::string& w)
      : error(errc::unknown_query, w) {}
};

struct no_target_candidates : error {
  explicit no_target_candidates(const std::string& w)
      : error(errc::empty_result, w) {}
};

struct all_pairs_oov : error {
  explicit all_pairs_oov(const std::string& w)
      : error(errc::eval_impossible, w) {}
};

}  // namespace bsc
