#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lctrs/logic/solver.hpp"
#include "lctrs/rewriting/rule.hpp"

namespace lctrs {

/// A PCP instance {(α₁,β₁),…,(α_N,β_N)} over {0,1} with some αᵢ ≠ βᵢ.
class PCPInstance {
 public:
  /// Throws std::invalid_argument when the instance is empty, a word is
  /// empty or not over {0,1}, or every αᵢ equals βᵢ.
  explicit PCPInstance(std::vector<std::pair<std::string, std::string>> pairs);

  /// Reads "α₁,β₁;α₂,β₂;…".
  static PCPInstance parse(std::string_view text);

  std::size_t size() const { return pairs_.size(); }
  const std::string& alpha(std::size_t i) const { return pairs_.at(i - 1).first; }
  const std::string& beta(std::size_t i) const { return pairs_.at(i - 1).second; }
  std::string to_string() const;

  /// α_w and β_w for an index string w over 1..N.
  std::string alpha_word(const std::vector<std::size_t>& w) const;
  std::string beta_word(const std::vector<std::size_t>& w) const;
  /// w is non-empty and α_w = β_w.
  bool is_solution(const std::vector<std::size_t>& w) const;

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

/// [ε] = 0 and [i₀i₁⋯i_k] = N·[i₁⋯i_k] + i₀. Throws std::out_of_range for
/// indices outside 1..N.
Integer encode_string(const std::vector<std::size_t>& indices, std::size_t n_pairs);
/// The inverse of encode_string; throws std::invalid_argument for n < 0 or N = 0.
std::vector<std::size_t> decode(const Integer& n, std::size_t n_pairs);

/// Index strings print as digit sequences for N ≤ 9 and dot-separated otherwise.
std::string index_string(const std::vector<std::size_t>& w, std::size_t n_pairs);

/// The LCTRS R_P. Bits 0 and 1 are the symbols bit0 and bit1, ⊤ and ⊥ are
/// top and bot.
Lctrs build_rp(const PCPInstance& p);

enum class CandidateResult { Solution, NonSolution, OutOfFuel };
std::string to_string(CandidateResult r);

/// Rewrites test(alpha(n), beta(n), n) with R_P for at most `fuel` steps,
/// by default 10·(|α_w| + |β_w|) for w = decode(n). Requires n > 0.
CandidateResult check_candidate(const PCPInstance& p, const Integer& n, const Solver& solver,
                                std::optional<std::size_t> fuel = std::nullopt);
CandidateResult check_candidate(const PCPInstance& p, const Lctrs& rp, const Integer& n, const Solver& solver,
                                std::optional<std::size_t> fuel = std::nullopt);

/// Shortest solution of length at most `max_length`, least in encoding order.
std::optional<std::vector<std::size_t>> find_solution(const PCPInstance& p, std::size_t max_length = 6);

}  // namespace lctrs
