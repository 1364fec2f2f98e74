#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agt::words {

/// A power of a single generator. Inverses are negative exponents.
struct Letter {
  std::uint32_t generator = 0;
  std::int32_t exponent = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Reduced word in a free group, stored run-length encoded: adjacent letters
/// always have distinct generators and no exponent is zero. The empty word is
/// the identity.
class Word {
 public:
  Word() = default;

  /// Freely reduces an arbitrary letter sequence. Zero exponents are dropped.
  static Word reduce(std::span<const Letter> raw);
  static Word generator(std::uint32_t index, std::int32_t exponent = 1);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  bool is_identity() const noexcept { return letters_.empty(); }

  /// Word length in the symmetric generating set (sum of |exponent|).
  std::size_t length() const noexcept;

  /// First unit letter as (generator, +1/-1); nullopt for the identity.
  std::optional<Letter> first_unit() const;

  /// Unit-letter expansion, e.g. a^2 b^-1 -> a a b^-1.
  std::vector<Letter> unit_letters() const;

  /// Largest generator index used plus one (0 for the identity).
  std::uint32_t rank_used() const noexcept;

  /// Injective byte encoding, used as a hash key.
  std::string key() const;

  /// Human-readable form with a, b, c, ... for generators and A, B, C for
  /// inverses, e.g. "aaB". Generators past 'z' are written g26^k.
  std::string str() const;

  friend Word operator*(const Word& u, const Word& v);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

Word multiply(const Word& u, const Word& v);
Word invert(const Word& u);

/// Parses "aaB", "ab^-1", "a^2 b" style text (letters a..z, capitals for
/// inverses, optional ^k exponents). Throws Error(InvalidArgument).
Word parse(const std::string& text);

/// Every reduced word of length <= radius over `rank` generators, each exactly
/// once, ordered by length and then by the extension order of the BFS.
std::vector<Word> enumerate_ball(std::uint32_t rank, std::uint32_t radius);

/// Number of reduced words of length exactly n in a free group of given rank.
std::uint64_t sphere_size(std::uint32_t rank, std::uint32_t n);

enum class Piece { Fa, FaInv, Fb, FbInv, Identity };

std::string to_string(Piece piece);

/// Which of the five pieces of F2 the word lies in (by its first letter).
/// Throws Error(RankUnsupported) for words using a third generator.
Piece classify_piece(const Word& w);

struct IdentityCheck {
  std::string name;
  bool passed = true;
  std::size_t words_checked = 0;
  std::optional<Word> counterexample;
};

struct ParadoxReport {
  std::uint32_t depth = 0;
  std::size_t ball_size = 0;
  /// Indexed by Piece.
  std::array<std::size_t, 5> piece_counts{};
  std::vector<IdentityCheck> identities;
  /// Membership on the right-hand side is looked up in the ball of this radius
  /// so that x^-1 F_x is never truncated at the boundary.
  std::uint32_t membership_radius = 0;

  bool passed() const;
};

/// Exhaustively checks the paradoxical decomposition of F2 on the ball of the
/// given depth: the five pieces partition it, a^-1 F_a = F2 \ F_{a^-1} and
/// b^-1 F_b = F2 \ F_{b^-1}.
ParadoxReport verify_paradox(std::uint32_t depth);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace agt::words
