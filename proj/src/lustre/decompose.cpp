#include "hrmv/lustre/decompose.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

#include "hrmv/lustre/elaborate.hpp"
#include "hrmv/lustre/typecheck.hpp"

namespace hrmv::lustre {

std::string promoted_name(const std::string& instance, const std::string& param)
{
  std::string s = instance + "_" + param;
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

namespace {

Node make_adapter(const Program& p, const Node& n)
{
  Node out;
  out.name = n.name;
  out.span = n.span;
  out.inputs = n.inputs;
  out.outputs = n.outputs;
  out.locals = n.locals;
  ContractSpec contract = n.contract.value_or(ContractSpec{});

  std::set<std::string> taken;
  for (const auto* list : {&n.inputs, &n.outputs, &n.locals})
    for (const auto& v : *list) taken.insert(v.name);
  auto claim = [&](const std::string& name, Span span) {
    if (!taken.insert(name).second)
      throw SourceError(span, "promoted name " + name + " clashes with a variable of " + n.name);
    return name;
  };

  std::vector<Param> new_inputs, new_outputs;
  std::vector<ContractSpec> lifted;
  std::map<std::string, int> counter;
  for (const auto& eq : n.equations) {
    if (eq.rhs->kind != LExpr::Kind::Call) {
      out.equations.push_back(eq);
      continue;
    }
    const Node* callee = p.find(eq.rhs->name);
    if (!callee) throw SourceError(eq.rhs->span, "unknown node " + eq.rhs->name);
    const std::string inst = callee->name + std::to_string(counter[callee->name]++);
    std::map<std::string, std::string> rename;
    std::set<std::string> callee_inputs;
    for (std::size_t i = 0; i < callee->inputs.size(); ++i) {
      const Param& param = callee->inputs[i];
      const std::string name = claim(promoted_name(inst, param.name), eq.span);
      rename[param.name] = name;
      callee_inputs.insert(name);
      new_outputs.push_back({name, param.sort, eq.span});
      out.equations.push_back({{name}, eq.rhs->args[i], eq.span});
    }
    for (std::size_t i = 0; i < callee->outputs.size(); ++i) {
      const Param& param = callee->outputs[i];
      const std::string name = claim(promoted_name(inst, param.name), eq.span);
      rename[param.name] = name;
      new_inputs.push_back({name, param.sort, eq.span});
      out.equations.push_back({{eq.lhs[i]}, LExpr::var(name, eq.span), eq.span});
    }
    if (!callee->contract) continue;
    ContractSpec c;
    for (const auto& g : callee->contract->guarantees) {
      LExprPtr r = rename_vars(g, rename);
      std::set<std::string> vars;
      collect_vars(r, vars);
      for (const auto& v : vars)
        if (callee_inputs.count(v))
          throw SourceError(g->span, "guarantee of " + callee->name +
                                         " mentions an input and cannot become an adapter assumption");
      c.guarantees.push_back(r);
    }
    for (const auto& a : callee->contract->assumes) c.assumes.push_back(rename_vars(a, rename));
    lifted.push_back(std::move(c));
  }

  out.inputs.insert(out.inputs.end(), new_inputs.begin(), new_inputs.end());
  out.outputs.insert(out.outputs.end(), new_outputs.begin(), new_outputs.end());
  // Sub-guarantees become adapter assumptions and sub-assumptions become
  // adapter guarantees.
  for (const auto& c : lifted) {
    contract.assumes.insert(contract.assumes.end(), c.guarantees.begin(), c.guarantees.end());
    contract.guarantees.insert(contract.guarantees.end(), c.assumes.begin(), c.assumes.end());
  }
  if (n.contract || !contract.assumes.empty() || !contract.guarantees.empty()) out.contract = contract;
  return out;
}

} // namespace

DecomposedProgram decompose_program(const Program& p, const std::string& main)
{
  typecheck(p);
  DecomposedProgram d;
  d.main = main;
  const InstanceTree tree = instantiate(p, main);

  std::map<std::string, std::vector<std::string>> instances;
  std::function<void(const InstanceTree&)> collect = [&](const InstanceTree& t) {
    instances[t.node->name].push_back(t.path.empty() ? main : t.path);
    for (const auto& c : t.children) collect(c);
  };
  collect(tree);

  for (const auto& name : reachable_nodes(p, main)) {
    const Node& n = *p.find(name);
    const bool hierarchical = !n.calls().empty();
    Node node = hierarchical ? make_adapter(p, n) : n;
    ManifestEntry e;
    e.node = name;
    e.adapter = hierarchical;
    e.has_contract = node.contract.has_value();
    if (node.contract) {
      e.assumes = node.contract->assumes.size();
      e.guarantees = node.contract->guarantees.size();
    }
    e.instances = instances[name];
    d.manifest.push_back(std::move(e));
    d.program.nodes.push_back(std::move(node));
  }
  typecheck(d.program);
  return d;
}

std::string DecomposedProgram::manifest_json() const
{
  nlohmann::json j;
  j["schema"] = "hrmv-manifest/1";
  j["main"] = main;
  j["obligations"] = nlohmann::json::array();
  for (const auto& e : manifest) {
    j["obligations"].push_back({{"node", e.node},
                                {"kind", e.adapter ? "adapter" : "leaf"},
                                {"has_contract", e.has_contract},
                                {"assumes", e.assumes},
                                {"guarantees", e.guarantees},
                                {"instances", e.instances}});
  }
  return j.dump(2) + "\n";
}

} // namespace hrmv::lustre
