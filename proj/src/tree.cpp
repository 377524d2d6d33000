#include "treecomp/tree.hpp"

#include <json.hpp>
#include <sstream>

#include "treecomp/json_util.hpp"

namespace treecomp {

using nlohmann::json;

Disjunction make_disjunction(std::vector<std::pair<Index, long long>> coeffs, long long offset) {
  std::sort(coeffs.begin(), coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Index, long long>> clean;
  for (const auto& [j, a] : coeffs) {
    if (a == 0) continue;
    if (!clean.empty() && clean.back().first == j)
      throw std::invalid_argument("duplicate index in disjunction");
    clean.emplace_back(j, a);
  }
  if (clean.empty()) throw std::invalid_argument("disjunction direction must be nonzero");
  return Disjunction{std::move(clean), offset};
}

Disjunction unit_disjunction(Index var, long long offset) {
  return Disjunction{{{var, 1}}, offset};
}

SparseRow BranchConstraint::as_row() const {
  std::vector<std::pair<Index, Rational>> coeffs;
  coeffs.reserve(disjunction.coeffs.size());
  if (side == Side::left) {
    for (const auto& [j, a] : disjunction.coeffs) coeffs.emplace_back(j, Rational(a));
    return make_row(std::move(coeffs), Rational(disjunction.offset));
  }
  for (const auto& [j, a] : disjunction.coeffs) coeffs.emplace_back(j, Rational(-a));
  return make_row(std::move(coeffs), Rational(-(disjunction.offset + 1)));
}

const BbNode& BbTree::node(NodeId v) const {
  auto it = nodes_.find(v);
  if (it == nodes_.end()) throw UnknownNode(v);
  return it->second;
}

BbNode& BbTree::node_mut(NodeId v) {
  auto it = nodes_.find(v);
  if (it == nodes_.end()) throw UnknownNode(v);
  return it->second;
}

void BbTree::check_node(NodeId v) const {
  if (!contains(v)) throw UnknownNode(v);
}

BbTree BbTree::make_root(std::shared_ptr<const Instance> instance, const LpContext& ctx) {
  BbTree t;
  t.instance_ = std::move(instance);
  BbNode root;
  root.id = 0;
  auto res = lp_solve(t.instance_->system, t.instance_->objective, ctx);
  root.lp_value = res.objective_bound();
  if (res.status == LpStatus::optimal) root.lp_point = res.point;
  t.nodes_.emplace(0, std::move(root));
  t.root_ = 0;
  t.next_id_ = 1;
  t.values_exact_ = ctx.backend == Backend::exact;
  return t;
}

std::vector<NodeId> BbTree::leaves() const {
  std::vector<NodeId> out;
  for (const auto& [id, nd] : nodes_)
    if (nd.is_leaf()) out.push_back(id);
  return out;
}

std::vector<NodeId> BbTree::preorder() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    const BbNode& nd = node(v);
    out.push_back(v);
    if (!nd.is_leaf()) {
      stack.push_back(nd.child_right);
      stack.push_back(nd.child_left);
    }
  }
  return out;
}

long long BbTree::subtree_size(NodeId v) const { return static_cast<long long>(subtree_nodes(v).size()); }

std::vector<NodeId> BbTree::subtree_nodes(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    const BbNode& nd = node(u);
    if (!nd.is_leaf()) {
      stack.push_back(nd.child_left);
      stack.push_back(nd.child_right);
    }
  }
  return out;
}

int BbTree::depth(NodeId v) const {
  check_node(v);
  int d = 0;
  while (node(v).parent >= 0) {
    v = node(v).parent;
    ++d;
  }
  return d;
}

LinearSystem BbTree::node_polyhedron(NodeId v) const {
  check_node(v);
  std::vector<const BranchConstraint*> path;
  for (NodeId u = v; u >= 0;) {
    const BbNode& nd = node(u);
    if (nd.branch) path.push_back(&*nd.branch);
    u = nd.parent;
  }
  LinearSystem sys = instance_->system;
  for (auto it = path.rbegin(); it != path.rend(); ++it) sys.add_row((*it)->as_row());
  return sys;
}

ExtValue BbTree::dual_bound() const {
  ExtValue best = ExtValue::pos_inf();
  for (const auto& [id, nd] : nodes_) {
    if (!nd.is_leaf()) continue;
    if (nd.lp_value < best) best = nd.lp_value;
  }
  return best;
}

void BbTree::revalidate_node(NodeId v, const LpContext& ctx) {
  check_node(v);
  auto res = lp_solve(node_polyhedron(v), instance_->objective, ctx);
  BbNode& nd = node_mut(v);
  nd.lp_value = res.objective_bound();
  nd.lp_point.reset();
  if (res.status == LpStatus::optimal) nd.lp_point = res.point;
}

void BbTree::make_leaf_values_exact(const LpContext& ctx) {
  if (values_exact_) return;
  LpContext exact = ctx.with_backend(Backend::exact);
  for (const auto& [id, nd] : nodes_)
    if (nd.is_leaf()) revalidate_node(id, exact);
  values_exact_ = true;
}

std::pair<NodeId, NodeId> BbTree::branch_leaf(NodeId v, const Disjunction& disjunction,
                                              const LpContext& ctx) {
  check_node(v);
  if (!node(v).is_leaf()) throw std::logic_error("branch_leaf: node already has children");
  const NodeId left = next_id_++;
  const NodeId right = next_id_++;
  for (Side side : {Side::left, Side::right}) {
    BbNode child;
    child.id = side == Side::left ? left : right;
    child.parent = v;
    child.branch = BranchConstraint{disjunction, side};
    nodes_.emplace(child.id, std::move(child));
  }
  node_mut(v).child_left = left;
  node_mut(v).child_right = right;
  for (NodeId c : {left, right}) revalidate_node(c, ctx);
  if (ctx.backend != Backend::exact) values_exact_ = false;
  return {left, right};
}

void BbTree::drop_in_place(NodeId v) {
  check_node(v);
  auto doomed = subtree_nodes(v);
  for (NodeId u : doomed) {
    if (u == v) continue;
    nodes_.erase(u);
  }
  BbNode& nd = node_mut(v);
  nd.child_left = -1;
  nd.child_right = -1;
}

std::pair<NodeId, NodeId> BbTree::replace_in_place(NodeId v, const Disjunction& d,
                                                   const LpContext& ctx) {
  check_node(v);
  if (node(v).is_leaf()) throw NodeIsLeaf(v);
  drop_in_place(v);
  return branch_leaf(v, d, ctx);
}

BbTree drop(const BbTree& t, NodeId v) {
  t.check_node(v);
  BbTree out = t;
  out.drop_in_place(v);
  return out;
}

BbTree replace(const BbTree& t, NodeId v, const Disjunction& d, const LpContext& ctx) {
  t.check_node(v);
  if (t.node(v).is_leaf()) throw NodeIsLeaf(v);
  BbTree out = t;
  out.replace_in_place(v, d, ctx);
  return out;
}

bool is_valid_compression_step(const BbTree& before, const BbTree& after) {
  if (!(after.size() < before.size())) return false;
  return after.dual_bound() >= before.dual_bound();
}

bool operator==(const BbTree& a, const BbTree& b) {
  if (a.root_ != b.root_ || a.next_id_ != b.next_id_) return false;
  if (a.nodes_.size() != b.nodes_.size()) return false;
  auto ia = a.nodes_.begin();
  auto ib = b.nodes_.begin();
  for (; ia != a.nodes_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    const BbNode& x = ia->second;
    const BbNode& y = ib->second;
    if (x.parent != y.parent || x.child_left != y.child_left || x.child_right != y.child_right)
      return false;
    if (x.branch.has_value() != y.branch.has_value()) return false;
    if (x.branch && !(*x.branch == *y.branch)) return false;
    if (x.lp_value != y.lp_value) return false;
  }
  return true;
}

namespace {

json disjunction_to_json(const Disjunction& d) {
  json pi = json::object();
  for (const auto& [j, a] : d.coeffs) pi[std::to_string(j)] = a;
  return json{{"pi", pi}, {"pi0", d.offset}};
}

Disjunction disjunction_from_json(const json& j) {
  std::vector<std::pair<Index, long long>> coeffs;
  for (const auto& [key, val] : j.at("pi").items())
    coeffs.emplace_back(static_cast<Index>(std::stoll(key)), val.get<long long>());
  return make_disjunction(std::move(coeffs), j.at("pi0").get<long long>());
}

}  // namespace

std::string BbTree::serialize() const {
  std::ostringstream os;
  json header;
  header["format"] = "bbtree-jsonl";
  header["version"] = 1;
  header["instance_hash"] = instance_hash(*instance_);
  json obj = json::array();
  for (Index i = 0; i < instance_->objective.size(); ++i) obj.push_back(instance_->objective(i).str());
  header["objective"] = obj;
  header["root"] = root_;
  header["next_id"] = next_id_;
  header["values_exact"] = values_exact_;
  os << header.dump() << "\n";
  for (const auto& [id, nd] : nodes_) {  // map order == creation order
    json line;
    line["id"] = id;
    if (nd.parent >= 0) {
      line["parent"] = nd.parent;
      line["side"] = nd.branch->side == Side::left ? "L" : "R";
      line["branch"] = disjunction_to_json(nd.branch->disjunction);
    } else {
      line["parent"] = nullptr;
    }
    line["lp"] = nd.lp_value.str();
    os << line.dump() << "\n";
  }
  return os.str();
}

BbTree BbTree::deserialize(const std::string& text, std::shared_ptr<const Instance> instance) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("empty tree file");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad tree header: ") + e.what());
  }
  if (header.value("format", "") != "bbtree-jsonl") throw SchemaError("not a bbtree-jsonl file");
  if (header.at("instance_hash").get<std::string>() != instance_hash(*instance))
    throw InstanceMismatch();
  BbTree t;
  t.instance_ = std::move(instance);
  t.root_ = header.at("root").get<NodeId>();
  t.next_id_ = header.at("next_id").get<NodeId>();
  t.values_exact_ = header.value("values_exact", true);
  long line_no = 1;
  try {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      json j = json::parse(line);
      BbNode nd;
      nd.id = j.at("id").get<NodeId>();
      if (!j.at("parent").is_null()) {
        nd.parent = j.at("parent").get<NodeId>();
        Side side = j.at("side").get<std::string>() == "L" ? Side::left : Side::right;
        nd.branch = BranchConstraint{disjunction_from_json(j.at("branch")), side};
      }
      nd.lp_value = ExtValue::parse(j.at("lp").get<std::string>());
      t.nodes_.emplace(nd.id, std::move(nd));
    }
  } catch (const json::exception& e) {
    throw SchemaError("tree file line " + std::to_string(line_no) + ": " + e.what());
  }
  // Rebuild child pointers from parent/side and validate shape.
  for (auto& [id, nd] : t.nodes_) {
    if (nd.parent < 0) continue;
    auto pit = t.nodes_.find(nd.parent);
    if (pit == t.nodes_.end()) throw SchemaError("node with missing parent");
    if (nd.branch->side == Side::left)
      pit->second.child_left = id;
    else
      pit->second.child_right = id;
  }
  if (!t.contains(t.root_)) throw SchemaError("root node missing");
  for (const auto& [id, nd] : t.nodes_) {
    if ((nd.child_left < 0) != (nd.child_right < 0))
      throw SchemaError("node " + std::to_string(id) + " has exactly one child");
  }
  return t;
}

}  // namespace treecomp
