#include "agt/words.hpp"

#include <cctype>
#include <cstdlib>
#include <unordered_set>

#include "agt/error.hpp"

namespace agt::words {

Word Word::reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.exponent == 0) continue;
    if (!out.empty() && out.back().generator == l.generator) {
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out));
}

Word Word::generator(std::uint32_t index, std::int32_t exponent) {
  const Letter l{index, exponent};
  return reduce(std::span<const Letter>(&l, 1));
}

std::size_t Word::length() const noexcept {
  std::size_t n = 0;
  for (const Letter& l : letters_) n += static_cast<std::size_t>(std::abs(l.exponent));
  return n;
}

std::optional<Letter> Word::first_unit() const {
  if (letters_.empty()) return std::nullopt;
  return Letter{letters_.front().generator, letters_.front().exponent > 0 ? 1 : -1};
}

std::vector<Letter> Word::unit_letters() const {
  std::vector<Letter> out;
  out.reserve(length());
  for (const Letter& l : letters_) {
    const std::int32_t step = l.exponent > 0 ? 1 : -1;
    for (std::int32_t k = 0; k != l.exponent; k += step) out.push_back({l.generator, step});
  }
  return out;
}

std::uint32_t Word::rank_used() const noexcept {
  std::uint32_t r = 0;
  for (const Letter& l : letters_) r = std::max(r, l.generator + 1);
  return r;
}

std::string Word::key() const {
  std::string k;
  k.reserve(letters_.size() * 8);
  for (const Letter& l : letters_) {
    k.append(reinterpret_cast<const char*>(&l.generator), sizeof l.generator);
    k.append(reinterpret_cast<const char*>(&l.exponent), sizeof l.exponent);
  }
  return k;
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string s;
  for (const Letter& l : letters_) {
    if (l.generator < 26) {
      const char c = static_cast<char>(l.exponent > 0 ? 'a' + l.generator : 'A' + l.generator);
      s.append(static_cast<std::size_t>(std::abs(l.exponent)), c);
    } else {
      s += "g" + std::to_string(l.generator) + "^" + std::to_string(l.exponent);
    }
  }
  return s;
}

Word operator*(const Word& u, const Word& v) {
  std::vector<Letter> out = u.letters_;
  for (const Letter& l : v.letters_) {
    if (!out.empty() && out.back().generator == l.generator) {
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out));
}

Word multiply(const Word& u, const Word& v) { return u * v; }

Word invert(const Word& u) {
  std::vector<Letter> out(u.letters().rbegin(), u.letters().rend());
  for (Letter& l : out) l.exponent = -l.exponent;
  return Word::reduce(out);
}

Word parse(const std::string& text) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c == '1' && text.size() == 1) return Word{};
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw Error(ErrorKind::InvalidArgument, "bad word '" + text + "'");
    }
    const bool upper = std::isupper(static_cast<unsigned char>(c));
    Letter l{static_cast<std::uint32_t>(std::tolower(c) - 'a'), upper ? -1 : 1};
    ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t end = i;
      if (end < text.size() && (text[end] == '-' || text[end] == '+')) ++end;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      if (end == i) throw Error(ErrorKind::InvalidArgument, "bad exponent in '" + text + "'");
      l.exponent *= std::stoi(text.substr(i, end - i));
      i = end;
    }
    raw.push_back(l);
  }
  return Word::reduce(raw);
}

std::vector<Word> enumerate_ball(std::uint32_t rank, std::uint32_t radius) {
  if (rank == 0) throw Error(ErrorKind::InvalidArgument, "rank must be >= 1");
  std::vector<Word> ball{Word{}};
  std::size_t level_begin = 0;
  for (std::uint32_t n = 1; n <= radius; ++n) {
    const std::size_t level_end = ball.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      // Generator and sign of the last unit letter; sign 0 for the identity.
      std::uint32_t last_gen = 0;
      std::int32_t last_sign = 0;
      if (!ball[i].is_identity()) {
        last_gen = ball[i].letters().back().generator;
        last_sign = ball[i].letters().back().exponent > 0 ? 1 : -1;
      }
      for (std::uint32_t g = 0; g < rank; ++g) {
        for (const std::int32_t e : {1, -1}) {
          if (last_gen == g && last_sign == -e) continue;
          ball.push_back(ball[i] * Word::generator(g, e));
        }
      }
    }
    level_begin = level_end;
  }
  return ball;
}

std::uint64_t sphere_size(std::uint32_t rank, std::uint32_t n) {
  if (n == 0) return 1;
  std::uint64_t s = 2ull * rank;
  for (std::uint32_t i = 1; i < n; ++i) s *= 2ull * rank - 1;
  return s;
}

std::string to_string(Piece piece) {
  switch (piece) {
    case Piece::Fa: return "F_a";
    case Piece::FaInv: return "F_a^-1";
    case Piece::Fb: return "F_b";
    case Piece::FbInv: return "F_b^-1";
    case Piece::Identity: return "identity";
  }
  return "?";
}

Piece classify_piece(const Word& w) {
  if (w.rank_used() > 2) {
    throw Error(ErrorKind::RankUnsupported, "piece classification needs a word in F2, got " + w.str());
  }
  const auto first = w.first_unit();
  if (!first) return Piece::Identity;
  if (first->generator == 0) return first->exponent > 0 ? Piece::Fa : Piece::FaInv;
  return first->exponent > 0 ? Piece::Fb : Piece::FbInv;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const Letter& l : w.letters()) {
    h ^= (static_cast<std::size_t>(l.generator) << 32 ^ static_cast<std::uint32_t>(l.exponent)) +
         0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool ParadoxReport::passed() const {
  for (const auto& c : identities) {
    if (!c.passed) return false;
  }
  return true;
}

namespace {

// x^-1 F_x == F2 \ F_{x^-1}, checked for every w in the inner ball. The
// left-hand side membership "x w in F_x" is looked up in the set of F_x words
// of the outer ball, never recomputed from the first letter of w.
IdentityCheck check_translate_identity(const std::vector<Word>& outer, std::size_t inner_size,
                                       std::uint32_t gen, const std::string& name) {
  const Piece forward = gen == 0 ? Piece::Fa : Piece::Fb;
  const Piece backward = gen == 0 ? Piece::FaInv : Piece::FbInv;
  std::unordered_set<Word, WordHash> forward_set;
  for (const Word& u : outer) {
    if (classify_piece(u) == forward) forward_set.insert(u);
  }
  const Word x = Word::generator(gen, 1);
  IdentityCheck check{name, true, 0, std::nullopt};
  for (std::size_t i = 0; i < inner_size; ++i) {
    const Word& w = outer[i];
    const bool in_lhs = forward_set.contains(x * w);
    const bool in_rhs = classify_piece(w) != backward;
    ++check.words_checked;
    if (in_lhs != in_rhs) {
      check.passed = false;
      check.counterexample = w;
      break;
    }
  }
  return check;
}

}  // namespace

ParadoxReport verify_paradox(std::uint32_t depth) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  ParadoxReport report;
  report.depth = depth;
  report.membership_radius = depth + 1;

  const std::vector<Word> outer = enumerate_ball(2, depth + 1);
  // The BFS order lists every word of length <= depth before longer ones.
  std::size_t inner_size = 0;
  while (inner_size < outer.size() && outer[inner_size].length() <= depth) ++inner_size;
  report.ball_size = inner_size;

  IdentityCheck partition{"five pieces partition the ball", true, 0, std::nullopt};
  for (std::size_t i = 0; i < inner_size; ++i) {
    const Word& w = outer[i];
    const auto& ls = w.letters();
    const bool starts[5] = {
        !ls.empty() && ls[0].generator == 0 && ls[0].exponent > 0,
        !ls.empty() && ls[0].generator == 0 && ls[0].exponent < 0,
        !ls.empty() && ls[0].generator == 1 && ls[0].exponent > 0,
        !ls.empty() && ls[0].generator == 1 && ls[0].exponent < 0,
        ls.empty(),
    };
    int hits = 0;
    for (bool s : starts) hits += s ? 1 : 0;
    const Piece piece = classify_piece(w);
    ++partition.words_checked;
    if (hits != 1 || !starts[static_cast<int>(piece)]) {
      partition.passed = false;
      partition.counterexample = w;
      break;
    }
    ++report.piece_counts[static_cast<std::size_t>(piece)];
  }
  std::size_t total = 0;
  for (std::size_t c : report.piece_counts) total += c;
  if (partition.passed && total != inner_size) partition.passed = false;
  report.identities.push_back(partition);

  report.identities.push_back(check_translate_identity(outer, inner_size, 0, "a^-1 F_a = F2 \\ F_a^-1"));
  report.identities.push_back(check_translate_identity(outer, inner_size, 1, "b^-1 F_b = F2 \\ F_b^-1"));
  return report;
}

}  // namespace agt::words
