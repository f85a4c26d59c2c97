#include "bayesdl/nnet/serialize.hpp"

#include <fstream>
#include <sstream>

#include "bayesdl/core/errors.hpp"
#include "json.hpp"

namespace bayesdl::nnet {

using nlohmann::json;

std::string network_to_json(const Network& net, int indent) {
  json doc;
  doc["input_dim"] = net.input_dim();
  doc["layers"] = json::array();
  for (const auto& layer : net.layers()) {
    json l;
    l["rows"] = layer.W.rows();
    l["cols"] = layer.W.cols();
    l["act"] = std::string(to_string(layer.act));
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.W.size()));
    for (Index i = 0; i < layer.W.rows(); ++i)
      for (Index j = 0; j < layer.W.cols(); ++j) w.push_back(layer.W(i, j));
    l["W"] = w;
    l["b"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
    doc["layers"].push_back(std::move(l));
  }
  return doc.dump(indent);
}

Network network_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputFormatError(std::string("network JSON: ") + e.what());
  }
  try {
    const Index input_dim = doc.at("input_dim").get<Index>();
    std::vector<Layer> layers;
    for (const auto& l : doc.at("layers")) {
      const Index rows = l.at("rows").get<Index>();
      const Index cols = l.at("cols").get<Index>();
      const auto w = l.at("W").get<std::vector<double>>();
      const auto b = l.at("b").get<std::vector<double>>();
      if (rows < 0 || cols < 0 || static_cast<Index>(w.size()) != rows * cols ||
          static_cast<Index>(b.size()) != rows)
        throw ShapeError("network JSON: weight arrays do not match rows/cols");
      Layer layer;
      layer.act = activation_from_string(l.at("act").get<std::string>());
      layer.W.resize(rows, cols);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) layer.W(i, j) = w[static_cast<std::size_t>(i * cols + j)];
      layer.b = Eigen::Map<const Vector>(b.data(), rows);
      layers.push_back(std::move(layer));
    }
    return Network(input_dim, std::move(layers));
  } catch (const json::exception& e) {
    throw InputFormatError(std::string("network JSON: ") + e.what());
  }
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << network_to_json(net, 1) << '\n';
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

}  // namespace bayesdl::nnet
