// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#include "curiomol/selfies.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "curiomol/errors.hpp"
#include "curiomol/random.hpp"

namespace curiomol {

namespace {

std::string bond_prefix(int order) {
  switch (order) {
    case 2: return "=";
    case 3: return "#";
    default: return "";
  }
}

}  // namespace

std::string to_string(const Token& token) {
  switch (token.kind) {
    case TokenKind::Atom:
      return "[" + bond_prefix(token.bond_order) + std::string(symbol(token.element)) + "]";
    case TokenKind::Branch:
      return "[" + bond_prefix(token.bond_order) + "Branch" + std::to_string(token.length_class) + "]";
    case TokenKind::Ring:
      return "[" + bond_prefix(token.bond_order) + "Ring" + std::to_string(token.length_class) + "]";
    case TokenKind::Index:
      return "[Idx" + std::to_string(token.index_value) + "]";
    case TokenKind::Stop:
      return "[STOP]";
  }
  return "[?]";
}

std::optional<Token> parse_token(std::string_view text) {
  if (text.size() < 3 || text.front() != '[' || text.back() != ']') return std::nullopt;
  std::string_view body = text.substr(1, text.size() - 2);
  if (body == "STOP") return Token::stop();

  if (body.starts_with("Idx")) {
    std::string_view digits = body.substr(3);
    if (digits.empty() || digits.size() > 2) return std::nullopt;
    if (digits.size() == 2 && digits[0] == '0') return std::nullopt;
    int v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    if (v > 15) return std::nullopt;
    return Token::index(v);
  }

  int order = 1;
  if (!body.empty() && body.front() == '=') {
    order = 2;
    body.remove_prefix(1);
  } else if (!body.empty() && body.front() == '#') {
    order = 3;
    body.remove_prefix(1);
  }

  for (std::string_view family : {"Branch", "Ring"}) {
    if (body.size() == family.size() + 1 && body.starts_with(family)) {
      const char len = body.back();
      if (len != '1' && len != '2') return std::nullopt;
      return family == "Branch" ? Token::branch(len - '0', order)
                                : Token::ring(len - '0', order);
    }
  }

  for (Element e : kElements) {
    if (body == symbol(e)) {
      if (order > max_valence(e)) return std::nullopt;
      return Token::atom(e, order);
    }
  }
  return std::nullopt;
}

int index_value_of(const Token& t) {
  switch (t.kind) {
    case TokenKind::Index:
      return t.index_value;
    case TokenKind::Ring:
      if (t.bond_order == 1) return t.length_class;  // [Ring1] 1, [Ring2] 2
      return 0;
    case TokenKind::Branch:
      // [Branch1] 3, [=Branch1] 4, [#Branch1] 5, [Branch2] 6, ...
      return 3 + 3 * (t.length_class - 1) + (t.bond_order - 1);
    case TokenKind::Atom:
      switch (t.element) {
        case Element::C:
          return t.bond_order == 1 ? 0 : (t.bond_order == 2 ? 12 : 13);
        case Element::O:
          return t.bond_order == 1 ? 9 : 0;
        case Element::N:
          return t.bond_order == 1 ? 10 : (t.bond_order == 2 ? 11 : 0);
        case Element::S:
          return t.bond_order == 1 ? 14 : 0;
        case Element::P:
          return t.bond_order == 1 ? 15 : 0;
        default:
          return 0;
      }
    case TokenKind::Stop:
      return 0;
  }
  return 0;
}

void TokenSequence::push_back(const Token& t) {
  if (terminated) throw ContractViolation("TokenSequence: append after [STOP]");
  tokens.push_back(t);
  if (t.is_stop()) terminated = true;
}

std::string to_string(const TokenSequence& seq) {
  std::string out;
  for (const Token& t : seq.tokens) out += to_string(t);
  return out;
}

TokenSequence parse_tokens(std::string_view text) {
  TokenSequence seq;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '[') {
      throw ParseError("expected '[' at offset " + std::to_string(pos), pos);
    }
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos) {
      throw ParseError("unterminated symbol at offset " + std::to_string(pos), pos);
    }
    const std::string_view sym = text.substr(pos, close - pos + 1);
    const auto tok = parse_token(sym);
    if (!tok) {
      throw ParseError("unknown symbol " + std::string(sym) + " at offset " + std::to_string(pos), pos);
    }
    if (seq.terminated) {
      throw ParseError("symbol after [STOP] at offset " + std::to_string(pos), pos);
    }
    seq.push_back(*tok);
    pos = close + 1;
  }
  return seq;
}

Alphabet::Alphabet(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (tokens_[i] == tokens_[j]) throw ContractViolation("Alphabet: duplicate token " + to_string(tokens_[i]));
    }
    if (tokens_[i].is_stop()) stop_index_ = static_cast<int>(i);
  }
  if (stop_index_ < 0) throw ContractViolation("Alphabet: missing [STOP]");
}

std::optional<int> Alphabet::index_of(const Token& t) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == t) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string Alphabet::serialize() const {
  std::string out;
  for (const Token& t : tokens_) out += to_string(t) + "\n";
  return out;
}

const Alphabet& default_alphabet() {
  static const Alphabet alphabet = [] {
    std::vector<Token> t;
    for (Element e : kElements) {
      for (int order = 1; order <= std::min(3, max_valence(e)); ++order) {
        t.push_back(Token::atom(e, order));
      }
    }
    t.push_back(Token::branch(1, 1));
    t.push_back(Token::branch(1, 2));
    t.push_back(Token::ring(1, 1));
    t.push_back(Token::ring(1, 2));
    for (int v = 0; v < 16; ++v) t.push_back(Token::index(v));
    t.push_back(Token::stop());
    return Alphabet(std::move(t));
  }();
  return alphabet;
}

namespace {

constexpr int kExhausted = -1;  // no free valence left: derivation of this chain ends

struct PendingRing {
  int left;
  int right;
  int order;
};

// Derivation-state decoder. `state` is the free valence of the previous atom
// (0 before the first atom); a chain ends when it reaches kExhausted.
class Deriver {
 public:
  explicit Deriver(std::span<const Token> tokens) : tokens_(tokens) {
    const auto stop = std::find_if(tokens.begin(), tokens.end(),
                                   [](const Token& t) { return t.is_stop(); });
    tokens_ = tokens.first(static_cast<std::size_t>(stop - tokens.begin()));
  }

  MolGraph run() {
    derive(std::numeric_limits<std::size_t>::max(), 0, -1);
    close_rings();
    MolGraph mol;
    mol.atoms.reserve(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const int h = fill_valence(elements_[i], used_[i]) - used_[i];
      mol.atoms.push_back({elements_[i], h, false});
    }
    mol.bonds = std::move(bonds_);
    assign_ring_flags(mol);
    return mol;
  }

 private:
  bool exhausted() const { return pos_ >= tokens_.size(); }

  int read_index(int symbols) {
    int q = 0;
    for (int i = 0; i < symbols; ++i) {
      const int v = exhausted() ? 0 : index_value_of(tokens_[pos_++]);
      q = q * 16 + v;
    }
    return q;
  }

  int add_atom(Element e) {
    elements_.push_back(e);
    used_.push_back(0);
    return static_cast<int>(elements_.size()) - 1;
  }

  void add_bond(int a, int b, int order) {
    bonds_.push_back({a, b, order});
    used_[a] += order;
    used_[b] += order;
  }

  std::size_t derive(std::size_t max_derive, int init_state, int root) {
    std::size_t derived = 0;
    int state = init_state;
    int prev = root;

    while (state != kExhausted && derived < max_derive) {
      if (exhausted()) break;
      const Token t = tokens_[pos_++];
      ++derived;
      int next_state = state;

      switch (t.kind) {
        case TokenKind::Index:
        case TokenKind::Stop:
          continue;
        case TokenKind::Branch: {
          if (state <= 1) break;
          const int branch_state = std::min(state - 1, t.bond_order);
          next_state = state - branch_state;
          const int q = read_index(t.length_class);
          derived += static_cast<std::size_t>(t.length_class) +
                     derive(static_cast<std::size_t>(q) + 1, branch_state, prev);
          break;
        }
        case TokenKind::Ring: {
          if (state == 0) break;
          const int order = std::min(t.bond_order, state);
          next_state = state - order == 0 ? kExhausted : state - order;
          const int q = read_index(t.length_class);
          derived += static_cast<std::size_t>(t.length_class);
          rings_.push_back({std::max(0, prev - (q + 1)), prev, order});
          break;
        }
        case TokenKind::Atom: {
          const int cap = max_valence(t.element);
          const int order = state == 0 ? 0 : std::min({t.bond_order, state, cap});
          next_state = cap - order == 0 ? kExhausted : cap - order;
          const int atom = add_atom(t.element);
          if (order > 0) add_bond(prev, atom, order);
          prev = atom;
          break;
        }
      }

      if (next_state == kExhausted) break;
      state = next_state;
    }

    while (derived < max_derive && !exhausted()) {
      ++pos_;
      ++derived;
    }
    return derived;
  }

  // Ring bonds are placed after the whole string is read, in token order.
  void close_rings() {
    for (const PendingRing& r : rings_) {
      if (r.left == r.right) continue;
      const int lfree = max_valence(elements_[r.left]) - used_[r.left];
      const int rfree = max_valence(elements_[r.right]) - used_[r.right];
      if (lfree <= 0 || rfree <= 0) continue;
      const int order = std::min({r.order, lfree, rfree});

      auto existing = std::find_if(bonds_.begin(), bonds_.end(), [&](const Bond& b) {
        return (b.a == r.left && b.b == r.right) || (b.a == r.right && b.b == r.left);
      });
      if (existing != bonds_.end()) {
        const int raised = std::min(order + existing->order, 3);
        const int delta = raised - existing->order;
        existing->order = raised;
        used_[r.left] += delta;
        used_[r.right] += delta;
      } else {
        add_bond(r.left, r.right, order);
      }
    }
  }

  std::span<const Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Element> elements_;
  std::vector<int> used_;
  std::vector<Bond> bonds_;
  std::vector<PendingRing> rings_;
};

}  // namespace

MolGraph decode(std::span<const Token> tokens) { return Deriver(tokens).run(); }

std::vector<MolGraph> decode_prefixes(const TokenSequence& seq) {
  std::vector<MolGraph> out;
  out.reserve(seq.size());
  const std::span<const Token> all(seq.tokens);
  for (std::size_t t = 1; t <= seq.size(); ++t) out.push_back(decode(all.first(t)));
  return out;
}

TokenSequence random_sequence(std::mt19937_64& rng, std::size_t max_len, const Alphabet& alphabet) {
  TokenSequence seq;
  while (seq.size() < max_len && !seq.terminated) {
    seq.push_back(alphabet[uniform_index(rng, alphabet.size())]);
  }
  return seq;
}

}  // namespace curiomol
