#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace vspec::backends {

/// Layout documents in the Wadler style: a `group` renders flat when the
/// remainder fits in the line width and breaks otherwise, with `nest`
/// controlling the indentation of broken lines. Rendering is a pure
/// function of the document, which is what makes emitted files
/// byte-stable across runs.
class Doc {
 public:
  Doc() : Doc(text("")) {}

  static Doc text(std::string s);
  /// A space when flat, a newline when broken.
  static Doc line();
  /// A newline in every layout; forces every enclosing group to break.
  static Doc hard_line();
  static Doc concat(std::vector<Doc> parts);
  static Doc group(Doc d);
  static Doc nest(int indent, Doc d);

 private:
  enum class Kind { Text, Line, HardLine, Concat, Group, Nest };

  struct Node {
    Kind kind;
    std::string text;
    int indent = 0;
    std::vector<Doc> kids;
  };

  explicit Doc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;

  friend std::string render(const Doc& d, int width);
};

Doc operator+(Doc a, Doc b);

std::string render(const Doc& d, int width);

}  // namespace vspec::backends
