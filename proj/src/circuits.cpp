#include "catprep/circuits.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace catprep {

namespace {

int ceil_log2(int w) {
  int d = 0;
  while ((1 << d) < w) ++d;
  return d;
}

void check_width(int w) {
  if (w < 1) throw std::invalid_argument("circuit width must be positive");
  if (w > kMaxQubits) {
    throw std::invalid_argument("circuit width exceeds " + std::to_string(kMaxQubits));
  }
}

}  // namespace

int PrepCircuit::cx_count() const {
  int n = 0;
  for (const auto& layer : layers) n += static_cast<int>(layer.size());
  return n;
}

PrepCircuit build_balanced_tree(int w) {
  check_width(w);
  PrepCircuit c;
  c.width = w;
  c.root = 0;
  c.parent.assign(w, -1);

  // Recursive interval halving: the owner of [a, b) entangles the first
  // qubit of the upper half, which owns that half from the next level on.
  // Every single-fault support is then a contiguous interval, and the
  // entangled set doubles per layer until qubits run out.
  struct Block {
    int a, b, layer;
  };
  std::vector<Block> blocks{{0, w, 1}};
  while (!blocks.empty()) {
    std::vector<Block> next;
    for (const Block& blk : blocks) {
      const int size = blk.b - blk.a;
      if (size < 2) continue;
      const int mid = blk.a + size / 2;
      if (static_cast<int>(c.layers.size()) < blk.layer) c.layers.resize(blk.layer);
      c.layers[blk.layer - 1].push_back({blk.a, mid});
      c.parent[mid] = blk.a;
      next.push_back({blk.a, mid, blk.layer + 1});
      next.push_back({mid, blk.b, blk.layer + 1});
    }
    blocks = std::move(next);
  }
  if (c.depth() != (w == 1 ? 0 : ceil_log2(w))) {
    throw std::logic_error("balanced tree depth mismatch");
  }
  return c;
}

PrepCircuit build_from_tree(const std::vector<int>& parent, int root,
                            int max_children) {
  const int w = static_cast<int>(parent.size());
  check_width(w);
  if (root < 0 || root >= w) throw std::invalid_argument("root out of range");
  if (parent[root] != -1 && parent[root] != root) {
    throw std::invalid_argument("root must have no parent");
  }

  std::vector<std::vector<int>> children(w);
  for (int q = 0; q < w; ++q) {
    if (q == root) continue;
    const int p = parent[q];
    if (p < 0 || p >= w) throw std::invalid_argument("parent index out of range");
    if (p == q) throw std::invalid_argument("self-loop in parent map");
    children[p].push_back(q);
  }

  // Rooted traversal: detects cycles and stray components, and its reverse
  // order accumulates subtree sizes leaves-first.
  std::vector<int> subtree_size(w, 0);
  std::vector<int> order;
  order.reserve(w);
  order.push_back(root);
  std::vector<bool> seen(w, false);
  seen[root] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int ch : children[order[i]]) {
      if (seen[ch]) throw std::invalid_argument("parent map contains a cycle");
      seen[ch] = true;
      order.push_back(ch);
    }
  }
  if (static_cast<int>(order.size()) != w) {
    throw std::invalid_argument("parent map is not a tree rooted at root");
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    subtree_size[*it] += 1;
    if (*it != root) subtree_size[parent[*it]] += subtree_size[*it];
  }

  for (int q = 0; q < w; ++q) {
    if (max_children > 0 && static_cast<int>(children[q].size()) > max_children) {
      throw std::invalid_argument("node " + std::to_string(q) + " has arity " +
                                  std::to_string(children[q].size()));
    }
    std::sort(children[q].begin(), children[q].end(), [&](int a, int b) {
      if (subtree_size[a] != subtree_size[b]) return subtree_size[a] > subtree_size[b];
      return a < b;
    });
  }

  PrepCircuit c;
  c.width = w;
  c.root = root;
  c.parent = parent;
  c.parent[root] = -1;

  // A node entangled at layer L can control one CNOT per layer starting at
  // L + 1, so its i-th scheduled child lands at layer L + 1 + i.
  std::vector<int> entangled_at(w, 0);
  for (int q : order) {
    int slot = entangled_at[q] + 1;
    for (int ch : children[q]) {
      if (static_cast<int>(c.layers.size()) < slot) c.layers.resize(slot);
      c.layers[slot - 1].push_back({q, ch});
      entangled_at[ch] = slot;
      ++slot;
    }
  }
  for (auto& layer : c.layers) {
    std::sort(layer.begin(), layer.end(),
              [](const CxGate& a, const CxGate& b) { return a.control < b.control; });
  }
  return c;
}

PartialTransversalCx::PartialTransversalCx(std::vector<std::pair<int, int>> p)
    : pairs(std::move(p)) {
  std::sort(pairs.begin(), pairs.end());
}

PartialTransversalCx PartialTransversalCx::from_controls_and_permutation(
    const std::vector<int>& controls, const std::vector<int>& sigma) {
  if (controls.size() != sigma.size()) {
    throw std::invalid_argument("controls and permutation size mismatch");
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(controls.size());
  for (std::size_t j = 0; j < controls.size(); ++j) {
    pairs.emplace_back(controls[j], sigma[j]);
  }
  return PartialTransversalCx(std::move(pairs));
}

void PartialTransversalCx::validate(int w, int w_prime) const {
  if (static_cast<int>(pairs.size()) != w_prime) {
    throw std::invalid_argument("wiring must contain exactly w' pairs");
  }
  ErrorMask data_seen = 0;
  ErrorMask anc_seen = 0;
  for (const auto& [d, a] : pairs) {
    if (d < 0 || d >= w) throw std::invalid_argument("data index out of range");
    if (a < 0 || a >= w_prime) throw std::invalid_argument("ancilla index out of range");
    if ((data_seen >> d) & 1U) throw std::invalid_argument("duplicate data index");
    if ((anc_seen >> a) & 1U) throw std::invalid_argument("duplicate ancilla index");
    data_seen |= ErrorMask{1} << d;
    anc_seen |= ErrorMask{1} << a;
  }
}

std::vector<int> PartialTransversalCx::controls() const {
  std::vector<int> out;
  out.reserve(pairs.size());
  for (const auto& [d, a] : pairs) out.push_back(d);
  return out;
}

std::vector<int> PartialTransversalCx::targets() const {
  std::vector<int> out;
  out.reserve(pairs.size());
  for (const auto& [d, a] : pairs) out.push_back(a);
  return out;
}

ErrorMask PartialTransversalCx::map_error(ErrorMask data_error) const {
  ErrorMask out = 0;
  for (const auto& [d, a] : pairs) {
    out |= ((data_error >> d) & 1U) << a;
  }
  return out;
}

int VerifiedPrepCircuit::cx_count() const {
  return data.cx_count() + ancilla.cx_count() + wiring.size();
}

int VerifiedPrepCircuit::prep_depth() const {
  return std::max(data.depth(), ancilla.depth());
}

VerifiedPrepCircuit assemble(PrepCircuit data, PrepCircuit ancilla,
                             PartialTransversalCx wiring) {
  if (ancilla.width > data.width) {
    throw std::invalid_argument("ancilla may not be larger than the data state");
  }
  wiring.validate(data.width, ancilla.width);
  return VerifiedPrepCircuit{std::move(data), std::move(ancilla), std::move(wiring)};
}

CircuitMetrics metrics(const VerifiedPrepCircuit& c) {
  CircuitMetrics m;
  m.cnot_depth = c.prep_depth() + 1;
  m.depth_report = m.cnot_depth + 1;
  m.cx_count = c.cx_count();
  m.qubit_count = c.qubit_count();
  return m;
}

FlatCircuit flatten(const PrepCircuit& c) {
  FlatCircuit f;
  f.qubits = c.width;
  f.plus.push_back(c.root);
  for (int q = 0; q < c.width; ++q) {
    if (q != c.root) f.zero.push_back(q);
  }
  f.layers = c.layers;
  return f;
}

FlatCircuit flatten(const VerifiedPrepCircuit& c) {
  const int w = c.width();
  FlatCircuit f;
  f.qubits = c.qubit_count();
  f.plus = {c.data.root, w + c.ancilla.root};
  for (int q = 0; q < w; ++q) {
    if (q != c.data.root) f.zero.push_back(q);
  }
  for (int q = 0; q < c.ancilla_width(); ++q) {
    if (q != c.ancilla.root) f.zero.push_back(w + q);
  }

  // Both preparations finish together at the transversal layer.
  const int depth = c.prep_depth();
  f.layers.assign(depth + 1, {});
  const int data_off = depth - c.data.depth();
  const int anc_off = depth - c.ancilla.depth();
  for (int i = 0; i < c.data.depth(); ++i) {
    for (const CxGate& g : c.data.layers[i]) {
      f.layers[data_off + i].push_back(g);
    }
  }
  for (int i = 0; i < c.ancilla.depth(); ++i) {
    for (const CxGate& g : c.ancilla.layers[i]) {
      f.layers[anc_off + i].push_back({w + g.control, w + g.target});
    }
  }
  for (const auto& [d, a] : c.wiring.pairs) {
    f.layers[depth].push_back({d, w + a});
  }
  for (int q = 0; q < c.ancilla_width(); ++q) f.measure_z.push_back(w + q);
  return f;
}

std::string to_text(const FlatCircuit& c) {
  std::ostringstream out;
  out << "QUBITS " << c.qubits << "\n";
  for (int q : c.plus) out << "PLUS " << q << "\n";
  for (int q : c.zero) out << "ZERO " << q << "\n";
  for (const auto& layer : c.layers) {
    out << "TICK\n";
    for (const CxGate& g : layer) {
      out << "CX " << g.control << " " << g.target << "\n";
    }
  }
  if (!c.measure_z.empty()) {
    out << "TICK\n";
    for (int q : c.measure_z) out << "MZ " << q << "\n";
  }
  return out.str();
}

FlatCircuit parse_circuit_text(const std::string& text) {
  FlatCircuit c;
  std::istringstream in(text);
  std::string line;
  bool have_qubits = false;
  bool in_layers = false;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("circuit line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    if (op == "QUBITS") {
      if (have_qubits) fail("duplicate QUBITS");
      if (!(ls >> c.qubits) || c.qubits < 1) fail("bad qubit count");
      have_qubits = true;
    } else if (op == "TICK") {
      c.layers.emplace_back();
      in_layers = true;
    } else if (op == "PLUS" || op == "ZERO" || op == "MZ") {
      int q = -1;
      if (!(ls >> q)) fail("missing qubit index");
      if (!have_qubits || q < 0 || q >= c.qubits) fail("qubit index out of range");
      if (op == "PLUS") {
        if (in_layers) fail("PLUS after first TICK");
        c.plus.push_back(q);
      } else if (op == "ZERO") {
        if (in_layers) fail("ZERO after first TICK");
        c.zero.push_back(q);
      } else {
        c.measure_z.push_back(q);
      }
    } else if (op == "CX") {
      int a = -1, b = -1;
      if (!(ls >> a >> b)) fail("CX needs two indices");
      if (!have_qubits || a < 0 || b < 0 || a >= c.qubits || b >= c.qubits || a == b) {
        fail("bad CX indices");
      }
      if (!in_layers) fail("CX before first TICK");
      c.layers.back().push_back({a, b});
    } else {
      fail("unknown record '" + op + "'");
    }
  }
  if (!have_qubits) throw std::invalid_argument("circuit text missing QUBITS header");
  // Trailing TICK before measurements leaves an empty layer; drop it.
  while (!c.layers.empty() && c.layers.back().empty()) c.layers.pop_back();
  return c;
}

std::string to_hex(ErrorMask e) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(e));
  return buf;
}

ErrorMask mask_from_hex(const std::string& s) {
  std::string_view v(s);
  if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);
  ErrorMask out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, 16);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("bad hex mask: " + s);
  }
  return out;
}

std::string to_bit_string(ErrorMask e, int n) {
  std::string out = "[";
  for (int i = 0; i < n; ++i) {
    if (i) out += ',';
    out += ((e >> i) & 1U) ? '1' : '0';
  }
  out += ']';
  return out;
}

}  // namespace catprep
