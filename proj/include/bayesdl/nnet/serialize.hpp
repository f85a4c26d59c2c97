#pragma once

#include <string>

#include "bayesdl/nnet/network.hpp"

namespace bayesdl::nnet {

/// {input_dim, layers:[{rows, cols, act, W:[row-major], b:[...]}]}.
/// Doubles are written in shortest round-trip form, so parsing the text
/// back reproduces every finite weight exactly.
std::string network_to_json(const Network& net, int indent = -1);
/// Throws InputFormatError on malformed documents, ShapeError on inconsistent shapes.
Network network_from_json(const std::string& text);

void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

}  // namespace bayesdl::nnet
