// SPDX-FileCopyrightText: Copyright (c) 2026 The curiomol Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CURIOMOL_SELFIES_HPP_
#define CURIOMOL_SELFIES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curiomol/molgraph.hpp"

namespace curiomol {

enum class TokenKind : std::uint8_t { Atom, Branch, Ring, Index, Stop };

//! One SELFIES symbol.
//!
//! Text forms: atoms `[C]`, `[=C]`, `[#N]`; branches `[Branch1]`,
//! `[=Branch2]`; rings `[Ring1]`, `[#Ring2]`; index symbols `[Idx0]` to
//! `[Idx15]`; and `[STOP]`.
struct Token {
  TokenKind kind = TokenKind::Stop;
  Element element = Element::C;
  int bond_order = 1;    // Atom, Branch, Ring: 1..3
  int length_class = 1;  // Branch, Ring: number of index symbols read (1 or 2)
  int index_value = 0;   // Index: 0..15

  static constexpr Token atom(Element e, int order = 1) {
    return {TokenKind::Atom, e, order, 1, 0};
  }
  static constexpr Token branch(int length_class, int order = 1) {
    return {TokenKind::Branch, Element::C, order, length_class, 0};
  }
  static constexpr Token ring(int length_class, int order = 1) {
    return {TokenKind::Ring, Element::C, order, length_class, 0};
  }
  static constexpr Token index(int value) {
    return {TokenKind::Index, Element::C, 1, 1, value};
  }
  static constexpr Token stop() { return {}; }

  bool is_stop() const { return kind == TokenKind::Stop; }

  friend bool operator==(const Token& a, const Token& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case TokenKind::Atom:
        return a.element == b.element && a.bond_order == b.bond_order;
      case TokenKind::Branch:
      case TokenKind::Ring:
        return a.length_class == b.length_class && a.bond_order == b.bond_order;
      case TokenKind::Index:
        return a.index_value == b.index_value;
      case TokenKind::Stop:
        return true;
    }
    return false;
  }
};

std::string to_string(const Token& token);

//! Parses one bracketed symbol such as "[=C]"; nullopt when unknown.
std::optional<Token> parse_token(std::string_view text);

//! Value a token carries when read as a branch length or ring offset.
//! Index symbols carry their own value; other symbols follow the standard
//! SELFIES index table, and symbols outside that table read as 0.
int index_value_of(const Token& token);

//! The MDP state: tokens appended so far. At most one Stop, last.
struct TokenSequence {
  std::vector<Token> tokens;
  bool terminated = false;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  //! Appends a token; a Stop marks the sequence terminated.
  void push_back(const Token& t);

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

//! Concatenated bracketed symbols, no separators.
std::string to_string(const TokenSequence& seq);

//! Exact inverse of to_string(TokenSequence). Throws ParseError carrying
//! the byte offset of the offending symbol.
TokenSequence parse_tokens(std::string_view text);

//! Ordered, duplicate-free action set with dense indices.
class Alphabet {
 public:
  explicit Alphabet(std::vector<Token> tokens);

  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  const std::vector<Token>& tokens() const { return tokens_; }
  std::optional<int> index_of(const Token& t) const;
  int stop_index() const { return stop_index_; }

  //! One symbol per line, in index order.
  std::string serialize() const;

 private:
  std::vector<Token> tokens_;
  int stop_index_ = -1;
};

//! The fixed action alphabet, in this order:
//!   atoms C, =C, #C, N, =N, #N, O, =O, S, =S, #S, P, =P, #P, F, Cl, Br;
//!   Branch1, =Branch1, Ring1, =Ring1; Idx0..Idx15; STOP.
const Alphabet& default_alphabet();

//! Decodes any sequence into a valid molecule. Never fails.
MolGraph decode(std::span<const Token> tokens);
inline MolGraph decode(const TokenSequence& seq) { return decode(seq.tokens); }

//! decode() of every prefix of length 1..size().
std::vector<MolGraph> decode_prefixes(const TokenSequence& seq);

//! I.i.d. uniform tokens from `alphabet`, truncated at the first Stop or at
//! `max_len`.
TokenSequence random_sequence(std::mt19937_64& rng, std::size_t max_len,
                              const Alphabet& alphabet = default_alphabet());

}  // namespace curiomol

#endif  // CURIOMOL_SELFIES_HPP_
