#include <string>
#include <string_view>
#include <vector>

#include "vspec/interp/interp.hpp"

namespace vspec::interp {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> tokens_of(std::string_view line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : line) {
    if (c == ';') {
      if (!cur.empty()) toks.push_back(std::move(cur));
      cur.clear();
      toks.push_back(";");
    } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      if (!cur.empty()) toks.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

Rational parse_num(const std::string& tok) {
  std::optional<Rational> r = tok.find('.') != std::string::npos
                                  ? Rational::parse_decimal(tok)
                                  : Rational::parse(tok);
  if (!r)
    throw Error(ErrorCode::SyntaxError,
                "network binding: '" + tok + "' is not a number");
  return *r;
}

}  // namespace

NetworkBinding parse_network_binding(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text);

  std::size_t first = 0;
  while (first < lines.size() && tokens_of(lines[first]).empty()) ++first;
  if (first == lines.size())
    throw Error(ErrorCode::SyntaxError,
                "network binding: expected 'affine' or 'table'");
  std::vector<std::string> header = tokens_of(lines[first]);

  NetworkBinding nb;
  if (header.size() == 1 && header[0] == "affine") {
    nb.form = NetworkBinding::Form::Affine;
    bool in_bias = false;
    for (std::size_t li = first + 1; li < lines.size(); ++li) {
      std::vector<std::string> toks = tokens_of(lines[li]);
      if (toks.empty()) continue;
      std::vector<Rational> left, right;
      bool seen_semi = false;
      for (const std::string& t : toks) {
        if (t == ";") {
          if (seen_semi || in_bias)
            throw Error(ErrorCode::SyntaxError,
                        "network binding: unexpected ';'");
          seen_semi = true;
        } else {
          (seen_semi ? right : left).push_back(parse_num(t));
        }
      }
      if (in_bias) {
        nb.bias.insert(nb.bias.end(), left.begin(), left.end());
      } else {
        if (!left.empty()) nb.weights.push_back(std::move(left));
        if (seen_semi) {
          nb.bias = std::move(right);
          in_bias = true;
        }
      }
    }
    if (!in_bias)
      throw Error(ErrorCode::SyntaxError,
                  "network binding: affine form needs ';' before the bias");
    if (nb.weights.empty())
      throw Error(ErrorCode::SyntaxError,
                  "network binding: affine form has no weight rows");
    for (const auto& row : nb.weights)
      if (row.size() != nb.weights[0].size())
        throw Error(ErrorCode::SyntaxError,
                    "network binding: weight rows have unequal lengths");
    if (nb.bias.size() != nb.weights.size())
      throw Error(ErrorCode::SyntaxError,
                  "network binding: bias length must equal the row count");
    return nb;
  }

  if (header.size() == 1 && header[0] == "table") {
    nb.form = NetworkBinding::Form::Table;
    for (std::size_t li = first + 1; li < lines.size(); ++li) {
      std::vector<std::string> toks = tokens_of(lines[li]);
      if (toks.empty()) continue;
      std::vector<Rational> ins, outs;
      bool seen_semi = false;
      for (const std::string& t : toks) {
        if (t == ";") {
          if (seen_semi)
            throw Error(ErrorCode::SyntaxError,
                        "network binding: unexpected ';'");
          seen_semi = true;
        } else {
          (seen_semi ? outs : ins).push_back(parse_num(t));
        }
      }
      if (!seen_semi)
        throw Error(ErrorCode::SyntaxError,
                    "network binding: table entries are 'inputs ; outputs'");
      if (!nb.table.empty() && (ins.size() != nb.table[0].first.size() ||
                                outs.size() != nb.table[0].second.size()))
        throw Error(ErrorCode::SyntaxError,
                    "network binding: table entries have unequal widths");
      nb.table.emplace_back(std::move(ins), std::move(outs));
    }
    if (nb.table.empty())
      throw Error(ErrorCode::SyntaxError,
                  "network binding: table form has no entries");
    return nb;
  }

  throw Error(ErrorCode::SyntaxError,
              "network binding: expected 'affine' or 'table'");
}

}  // namespace vspec::interp
