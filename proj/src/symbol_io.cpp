#include <fstream>
#include <iomanip>
#include <sstream>

#include "cspath/poly_symbol.hpp"

namespace cspath {

namespace {

std::vector<int> slots_of(const FockIndex& m) {
  std::vector<int> slots;
  for (int k = 0; k < static_cast<int>(m.size()); ++k) {
    for (int r = 0; r < m[k]; ++r) slots.push_back(k);
  }
  return slots;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw SymbolFormatError("symbol line " + std::to_string(line) + ": " + msg);
}

}  // namespace

void write_symbol(std::ostream& os, const PolySymbol& p) {
  os << "# k l creation... annihilation... re im\n";
  os << "modes " << p.num_modes() << '\n';
  os << std::setprecision(17);
  for (const auto& [m, c] : p.terms()) {
    const auto creation = slots_of(m.bar);
    const auto annihilation = slots_of(m.hol);
    os << creation.size() << ' ' << annihilation.size();
    for (int i : creation) os << ' ' << i;
    for (int j : annihilation) os << ' ' << j;
    os << ' ' << c.real() << ' ' << c.imag() << '\n';
  }
}

PolySymbol read_symbol(std::istream& is) {
  std::string raw;
  int line_no = 0;
  int modes = 0;
  std::vector<std::tuple<int, std::vector<int>, std::vector<int>, Complex>> entries;

  while (std::getline(is, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string first;
    if (!(line >> first)) continue;

    if (first == "modes") {
      if (modes != 0) fail(line_no, "duplicate 'modes' header");
      if (!(line >> modes) || modes < 1) fail(line_no, "'modes' needs a positive integer");
      continue;
    }

    int k = 0, l = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(first, &used);
      if (used != first.size()) fail(line_no, "expected integer k, got '" + first + "'");
    } catch (const std::logic_error&) {
      fail(line_no, "expected integer k, got '" + first + "'");
    }
    if (!(line >> l) || k < 0 || l < 0) fail(line_no, "expected non-negative k and l");
    std::vector<int> creation(k), annihilation(l);
    for (int& i : creation) {
      if (!(line >> i)) fail(line_no, "missing creation index");
    }
    for (int& j : annihilation) {
      if (!(line >> j)) fail(line_no, "missing annihilation index");
    }
    double re = 0.0, im = 0.0;
    if (!(line >> re >> im)) fail(line_no, "missing coefficient (re im)");
    std::string extra;
    if (line >> extra) fail(line_no, "trailing token '" + extra + "'");
    entries.emplace_back(line_no, std::move(creation), std::move(annihilation), Complex(re, im));
  }
  if (modes == 0) throw SymbolFormatError("symbol file has no 'modes' header");

  PolySymbol p(modes);
  for (const auto& [ln, creation, annihilation, value] : entries) {
    try {
      p.add_tensor_entry(creation, annihilation, value);
    } catch (const std::invalid_argument& e) {
      fail(ln, e.what());
    }
  }
  return p;
}

PolySymbol read_symbol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SymbolFormatError("cannot open symbol file '" + path + "'");
  return read_symbol(in);
}

}  // namespace cspath
