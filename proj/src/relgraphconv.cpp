#include "tempograph/relgraphconv.hpp"

#include <string>
#include <unordered_map>
#include <vector>

#include <omp.h>

#include "tempograph/errors.hpp"

namespace tempograph {

RelConvLayer make_layer(std::size_t d_in, std::size_t d_out, Activation act, Normalizer norm) {
  RelConvLayer layer;
  const auto rows = static_cast<Eigen::Index>(d_out);
  const auto cols = static_cast<Eigen::Index>(d_in);
  for (auto& w : layer.relation_weights) w = Eigen::MatrixXd::Zero(rows, cols);
  layer.self_weight = Eigen::MatrixXd::Zero(rows, cols);
  layer.activation = act;
  layer.normalizer = norm;
  return layer;
}

namespace {

struct InEdge {
  std::size_t source_row;
  std::size_t relation;
};

// In-edges grouped by destination row.
std::vector<std::vector<InEdge>> incoming(const GnnExport& graph) {
  std::unordered_map<NodeId, std::size_t> row_of;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) row_of.emplace(graph.nodes[i].id, i);
  std::vector<std::vector<InEdge>> in(graph.nodes.size());
  for (const GnnEdge& e : graph.edges) {
    auto s = row_of.find(e.src);
    auto d = row_of.find(e.dst);
    if (s == row_of.end() || d == row_of.end()) {
      throw DimensionMismatch("edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                              " references a node outside the export");
    }
    if (e.relation >= kRelationCount) throw DimensionMismatch("relation id out of range");
    in[d->second].push_back({s->second, e.relation});
  }
  return in;
}

void check_shapes(const RelConvLayer& layer, const GnnExport& graph, const NodeStates& h) {
  const auto rows = layer.self_weight.rows();
  const auto cols = layer.self_weight.cols();
  for (const auto& w : layer.relation_weights) {
    if (w.rows() != rows || w.cols() != cols) throw DimensionMismatch("relation weight shape differs from self weight");
  }
  if (h.rows() != static_cast<Eigen::Index>(graph.nodes.size())) {
    throw DimensionMismatch("state rows " + std::to_string(h.rows()) + " != nodes " +
                            std::to_string(graph.nodes.size()));
  }
  if (h.cols() != cols) {
    throw DimensionMismatch("state width " + std::to_string(h.cols()) + " != layer input " +
                            std::to_string(cols));
  }
}

Eigen::VectorXd node_update(const RelConvLayer& layer, const std::vector<InEdge>& in,
                            const NodeStates& h, std::size_t i) {
  const auto d_in = layer.self_weight.cols();
  std::array<Eigen::VectorXd, kRelationCount> sums;
  std::array<std::size_t, kRelationCount> counts{};
  for (auto& s : sums) s = Eigen::VectorXd::Zero(d_in);
  for (const InEdge& e : in) {
    sums[e.relation] += h.row(static_cast<Eigen::Index>(e.source_row)).transpose();
    ++counts[e.relation];
  }
  Eigen::VectorXd out = layer.self_weight * h.row(static_cast<Eigen::Index>(i)).transpose();
  for (std::size_t r = 0; r < kRelationCount; ++r) {
    if (counts[r] == 0) continue;
    const double c = layer.normalizer == Normalizer::kCount ? static_cast<double>(counts[r]) : 1.0;
    out += layer.relation_weights[r] * (sums[r] / c);
  }
  if (layer.activation == Activation::kRelu) out = out.cwiseMax(0.0);
  return out;
}

}  // namespace

NodeStates forward(const RelConvLayer& layer, const GnnExport& graph, const NodeStates& h) {
  check_shapes(layer, graph, h);
  const auto in = incoming(graph);
  NodeStates out(h.rows(), layer.self_weight.rows());
  const auto n = static_cast<std::ptrdiff_t>(graph.nodes.size());
#pragma omp parallel for schedule(static) if (n > 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out.row(i) = node_update(layer, in[i], h, static_cast<std::size_t>(i)).transpose();
  }
  return out;
}

NodeStates forward_serial(const RelConvLayer& layer, const GnnExport& graph, const NodeStates& h) {
  check_shapes(layer, graph, h);
  const auto in = incoming(graph);
  NodeStates out(h.rows(), layer.self_weight.rows());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = node_update(layer, in[i], h, i).transpose();
  }
  return out;
}

}  // namespace tempograph
