#include "vspec/backends/doc.hpp"

namespace vspec::backends {

Doc Doc::text(std::string s) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Text;
  n->text = std::move(s);
  return Doc(n);
}

Doc Doc::line() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Line;
  return Doc(n);
}

Doc Doc::hard_line() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::HardLine;
  return Doc(n);
}

Doc Doc::concat(std::vector<Doc> parts) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Concat;
  n->kids = std::move(parts);
  return Doc(n);
}

Doc Doc::group(Doc d) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Group;
  n->kids.push_back(std::move(d));
  return Doc(n);
}

Doc Doc::nest(int indent, Doc d) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Nest;
  n->indent = indent;
  n->kids.push_back(std::move(d));
  return Doc(n);
}

Doc operator+(Doc a, Doc b) { return Doc::concat({std::move(a), std::move(b)}); }

std::string render(const Doc& d, int width) {
  struct Entry {
    int indent;
    bool flat;
    const Doc::Node* node;
  };

  // Would the work list, laid out flat, fit in the remaining columns? A
  // hard line never fits flat; reaching a broken soft line settles it.
  auto fits = [&](int col, std::vector<Entry> work) -> bool {
    while (col <= width) {
      if (work.empty()) return true;
      Entry e = work.back();
      work.pop_back();
      switch (e.node->kind) {
        case Doc::Kind::Text:
          col += static_cast<int>(e.node->text.size());
          break;
        case Doc::Kind::Line:
          if (!e.flat) return true;
          col += 1;
          break;
        case Doc::Kind::HardLine:
          return !e.flat;
        case Doc::Kind::Concat:
        case Doc::Kind::Group:
          for (auto it = e.node->kids.rbegin(); it != e.node->kids.rend(); ++it)
            work.push_back({e.indent, e.flat, it->node_.get()});
          break;
        case Doc::Kind::Nest:
          work.push_back(
              {e.indent + e.node->indent, e.flat, e.node->kids[0].node_.get()});
          break;
      }
    }
    return false;
  };

  std::string out;
  int col = 0;
  std::vector<Entry> work{{0, false, d.node_.get()}};
  while (!work.empty()) {
    Entry e = work.back();
    work.pop_back();
    switch (e.node->kind) {
      case Doc::Kind::Text:
        out += e.node->text;
        col += static_cast<int>(e.node->text.size());
        break;
      case Doc::Kind::Line:
      case Doc::Kind::HardLine:
        if (e.flat && e.node->kind == Doc::Kind::Line) {
          out += ' ';
          col += 1;
        } else {
          out += '\n';
          out.append(static_cast<std::size_t>(e.indent), ' ');
          col = e.indent;
        }
        break;
      case Doc::Kind::Concat:
        for (auto it = e.node->kids.rbegin(); it != e.node->kids.rend(); ++it)
          work.push_back({e.indent, e.flat, it->node_.get()});
        break;
      case Doc::Kind::Group: {
        std::vector<Entry> probe = work;
        probe.push_back({e.indent, true, e.node->kids[0].node_.get()});
        bool flat = e.flat || fits(col, std::move(probe));
        work.push_back({e.indent, flat, e.node->kids[0].node_.get()});
        break;
      }
      case Doc::Kind::Nest:
        work.push_back(
            {e.indent + e.node->indent, e.flat, e.node->kids[0].node_.get()});
        break;
    }
  }
  return out;
}

}  // namespace vspec::backends
