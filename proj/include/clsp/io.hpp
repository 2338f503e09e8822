#pragma once

// Text formats:
//
//   clsp v1            instance file; '#' starts a comment
//   items N
//   periods T
//   K k_1 .. k_N
//   S s_1 .. s_N
//   h h_1 .. h_N
//   C c_1 .. c_T
//   d_11 .. d_1T       N demand rows
//   ...
//
//   <instance-id> <cost>   reference file, one entry per line

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/model.hpp"

namespace clsp {

namespace detail {

inline std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  return tokens;
}

inline Count parse_count(std::string_view tok) {
  Count v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + std::string(tok) + "'");
  return v;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  const std::string& next(std::string_view what) {
    if (pos_ >= tokens_.size()) throw ParseError("unexpected end of input while reading " + std::string(what));
    return tokens_[pos_++];
  }
  void expect(std::string_view keyword) {
    const auto& tok = next(keyword);
    if (tok != keyword) throw ParseError("expected '" + std::string(keyword) + "', got '" + tok + "'");
  }
  Count count(std::string_view what) { return parse_count(next(what)); }
  std::vector<Count> counts(std::size_t n, std::string_view what) {
    std::vector<Count> v(n);
    for (auto& x : v) x = count(what);
    return v;
  }
  bool done() const noexcept { return pos_ == tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

inline void write_row(std::ostream& out, std::string_view label, const std::vector<Count>& values) {
  out << label;
  for (Count v : values) out << ' ' << v;
  out << '\n';
}

}  // namespace detail

inline Instance read_instance(std::istream& in) {
  detail::TokenCursor cur(detail::tokenize(in));
  cur.expect("clsp");
  cur.expect("v1");
  cur.expect("items");
  const Count n = cur.count("item count");
  cur.expect("periods");
  const Count t = cur.count("period count");
  if (n <= 0 || t <= 0) throw ParseError("item and period counts must be positive");
  const auto un = static_cast<std::size_t>(n);
  const auto ut = static_cast<std::size_t>(t);
  cur.expect("K");
  auto usage = cur.counts(un, "K row");
  cur.expect("S");
  auto setup = cur.counts(un, "S row");
  cur.expect("h");
  auto holding = cur.counts(un, "h row");
  cur.expect("C");
  auto capacity = cur.counts(ut, "C row");
  Matrix<Count> demand(un, ut);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t p = 0; p < ut; ++p) demand(i, p) = cur.count("demand row");
  if (!cur.done()) throw ParseError("trailing tokens after demand rows");
  return Instance(std::move(demand), std::move(usage), std::move(capacity), std::move(setup), std::move(holding));
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  out << "clsp v1\n";
  out << "items " << inst.items() << '\n';
  out << "periods " << inst.periods() << '\n';
  detail::write_row(out, "K", inst.usage());
  detail::write_row(out, "S", inst.setup());
  detail::write_row(out, "h", inst.holding());
  detail::write_row(out, "C", inst.capacity());
  for (std::size_t i = 0; i < inst.items(); ++i) {
    for (std::size_t t = 0; t < inst.periods(); ++t) out << (t ? " " : "") << inst.demand(i, t);
    out << '\n';
  }
}

inline std::string to_text(const Instance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

inline Instance instance_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path);
  return read_instance(in);
}

inline void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write instance file " + path);
  write_instance(out, inst);
}

/// Known reference costs keyed by instance id.
using ReferenceTable = std::map<std::string, double>;

inline ReferenceTable read_references(std::istream& in) {
  ReferenceTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string id, cost;
    if (!(ls >> id)) continue;
    if (!(ls >> cost)) throw ParseError("reference line " + std::to_string(lineno) + ": missing cost");
    double v = 0;
    auto [ptr, ec] = std::from_chars(cost.data(), cost.data() + cost.size(), v);
    if (ec != std::errc{} || ptr != cost.data() + cost.size())
      throw ParseError("reference line " + std::to_string(lineno) + ": bad cost '" + cost + "'");
    table[id] = v;
  }
  return table;
}

inline ReferenceTable load_references(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open reference file " + path);
  return read_references(in);
}

}  // namespace clsp
