#include "causalprobe/compile.hpp"

#include "causalprobe/errors.hpp"

namespace causalprobe {

namespace {

constexpr double kWide = 1e308;

Expr lit(double v) { return Expr::literal(Value(v)); }

Expr wrap_activation(Activation act, Expr pre) {
  switch (act) {
    case Activation::Identity: return pre;
    case Activation::Relu: return Expr::call(FuncOp::Relu, {std::move(pre)});
    case Activation::Logistic:
      return Expr::call(FuncOp::Logistic, {std::move(pre)});
    case Activation::Tanh: return Expr::call(FuncOp::Tanh, {std::move(pre)});
  }
  return pre;
}

// ((w0*t0 + w1*t1) + ...) + bias, mirroring the forward accumulation order.
Expr affine(const std::vector<double>& weights, const std::vector<Expr>& terms,
            double bias) {
  Expr acc;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    Expr term = Expr::binary(BinaryOp::Mul, lit(weights[j]), terms[j]);
    acc = j == 0 ? std::move(term)
                 : Expr::binary(BinaryOp::Add, std::move(acc), std::move(term));
  }
  if (!acc.valid()) return lit(bias);
  return Expr::binary(BinaryOp::Add, std::move(acc), lit(bias));
}

}  // namespace

CompiledGraph compile_to_graph(const NeuralNetwork& net,
                               const FeatureDictionary* dict) {
  if (dict) {
    dict->validate();
    if (dict->attach_layer < 0 ||
        dict->attach_layer >= static_cast<int>(net.layer_count()))
      throw ValidationError("dictionary attach layer out of range");
    if (dict->width != net.layer(dict->attach_layer).out_width)
      throw ValidationError("dictionary width does not match its layer");
  }

  CompiledGraph compiled;
  std::vector<Variable> variables;
  std::vector<StructuralEquation> equations;

  for (std::size_t j = 0; j < net.input_width(); ++j) {
    NodeRef node = NodeRef::input(static_cast<int>(j));
    compiled.inputs.push_back(node);
    variables.push_back({node.name(), Domain::real_interval(-kWide, kWide)});
  }

  // Expression terms the next layer consumes.
  std::vector<Expr> current;
  for (const NodeRef& in : compiled.inputs)
    current.push_back(Expr::var(in.name()));

  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    std::vector<Expr> next;
    for (std::size_t i = 0; i < layer.out_width; ++i) {
      NodeRef node = NodeRef::neuron(static_cast<int>(l), static_cast<int>(i));
      std::vector<double> row(layer.in_width);
      for (std::size_t j = 0; j < layer.in_width; ++j) row[j] = layer.weight(i, j);
      Expr body = wrap_activation(layer.activation,
                                  affine(row, current, layer.bias[i]));
      variables.push_back({node.name(), Domain::real_interval(-kWide, kWide)});
      StructuralEquation eq;
      eq.target = node.name();
      eq.body = std::move(body);
      eq.parents = eq.body.free_variables();
      equations.push_back(std::move(eq));
      compiled.nodes.push_back(node);
      next.push_back(Expr::var(node.name()));
    }

    if (dict && static_cast<int>(l) == dict->attach_layer) {
      // Feature variables between the layer and its consumers.
      std::vector<Expr> feature_vars;
      for (std::size_t t = 0; t < dict->feature_count; ++t) {
        NodeRef node = NodeRef::feature(static_cast<int>(t));
        std::vector<Expr> centered;
        std::vector<double> row(dict->width);
        for (std::size_t j = 0; j < dict->width; ++j) {
          row[j] = dict->w_encode[t * dict->width + j];
          centered.push_back(Expr::binary(BinaryOp::Sub, next[j],
                                          lit(dict->b_decode[j])));
        }
        Expr body = Expr::call(
            FuncOp::Relu, {affine(row, centered, dict->b_encode[t])});
        variables.push_back({node.name(), Domain::real_interval(-kWide, kWide)});
        StructuralEquation eq;
        eq.target = node.name();
        eq.body = std::move(body);
        eq.parents = eq.body.free_variables();
        equations.push_back(std::move(eq));
        compiled.nodes.push_back(node);
        feature_vars.push_back(Expr::var(node.name()));
      }
      // Consumers read the inlined reconstruction r_j = W_d f + b_d.
      std::vector<Expr> recon;
      for (std::size_t j = 0; j < dict->width; ++j) {
        std::vector<double> row(dict->feature_count);
        for (std::size_t t = 0; t < dict->feature_count; ++t)
          row[t] = dict->w_decode[j * dict->feature_count + t];
        recon.push_back(affine(row, feature_vars, dict->b_decode[j]));
      }
      current = std::move(recon);
    } else {
      current = std::move(next);
    }
  }

  compiled.graph = build_graph(std::move(variables), std::move(equations));
  return compiled;
}

Assignment input_assignment(const NeuralNetwork& net,
                            const std::vector<double>& input) {
  if (input.size() != net.input_width())
    throw ValidationError("input width does not match network");
  Assignment a;
  for (std::size_t j = 0; j < input.size(); ++j)
    a.set(NodeRef::input(static_cast<int>(j)).name(), Value(input[j]));
  return a;
}

}  // namespace causalprobe
