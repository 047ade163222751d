#include "tnpath/expression_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tnpath {

using nlohmann::json;

TensorNetwork parse_einsum_string(std::string_view text, const SizeDict& sizes) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  const auto arrow = compact.find("->");
  if (arrow == std::string::npos) throw Error("einsum expression has no '->'");
  if (compact.find("->", arrow + 2) != std::string::npos) {
    throw Error("einsum expression has more than one '->'");
  }

  auto to_labels = [](std::string_view term) {
    IndexList labels;
    for (char c : term) {
      if (c == '-' || c == '>') throw Error(std::string("unexpected '") + c + "' in einsum term");
      labels.emplace_back(1, c);
    }
    return labels;
  };

  std::vector<IndexList> inputs;
  const std::string_view lhs(compact.data(), arrow);
  std::size_t begin = 0;
  while (true) {
    auto comma = lhs.find(',', begin);
    inputs.push_back(to_labels(lhs.substr(begin, comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  const std::string_view rhs = std::string_view(compact).substr(arrow + 2);
  if (rhs.find(',') != std::string_view::npos) throw Error("output term may not contain ','");
  IndexList output = to_labels(rhs);

  // Validation order gives each failure its own diagnostic.
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    for (std::size_t i = 0; i < inputs[t].size(); ++i) {
      for (std::size_t j = i + 1; j < inputs[t].size(); ++j) {
        if (inputs[t][i] == inputs[t][j]) {
          throw Error("index '" + inputs[t][i] + "' repeated within input term " +
                      std::to_string(t));
        }
      }
    }
  }
  for (const auto& label : output) {
    bool found = false;
    for (const auto& term : inputs) {
      for (const auto& l : term) found = found || l == label;
    }
    if (!found) throw Error("output index '" + label + "' does not occur in any input term");
  }
  SizeDict used;
  for (const auto& term : inputs) {
    for (const auto& label : term) {
      auto it = sizes.find(label);
      if (it == sizes.end()) throw Error("no extent given for index '" + label + "'");
      used.emplace(*it);
    }
  }
  return TensorNetwork(std::move(inputs), std::move(output), std::move(used));
}

SizeDict parse_sizes(std::string_view text) {
  SizeDict sizes;
  std::istringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string clean;
    for (char c : item) {
      if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    }
    if (clean.empty()) continue;
    auto eq = clean.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("malformed size entry '" + item + "'");
    const std::string value = clean.substr(eq + 1);
    std::size_t used = 0;
    long long extent = 0;
    try {
      extent = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw Error("extent of '" + clean.substr(0, eq) + "' is not an integer");
    }
    if (!sizes.emplace(clean.substr(0, eq), extent).second) {
      throw Error("extent of '" + clean.substr(0, eq) + "' given twice");
    }
  }
  return sizes;
}

namespace {

IndexList label_array(const json& node, const std::string& where) {
  if (!node.is_array()) throw Error(where + ": expected an array of strings");
  IndexList labels;
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_string()) {
      throw Error(where + "[" + std::to_string(k) + "]: expected a string");
    }
    labels.push_back(node[k].get<std::string>());
  }
  return labels;
}

std::string optional_string(const json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  if (!doc[key].is_string()) throw Error(std::string(key) + ": expected a string");
  return doc[key].get<std::string>();
}

}  // namespace

InstanceDocument parse_instance_document(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(std::string("instance document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("instance document: expected an object");
  for (const char* key : {"inputs", "output", "index_sizes"}) {
    if (!doc.contains(key)) throw Error(std::string(key) + ": missing");
  }

  const json& inputs_node = doc["inputs"];
  if (!inputs_node.is_array()) throw Error("inputs: expected an array of arrays");
  std::vector<IndexList> inputs;
  for (std::size_t t = 0; t < inputs_node.size(); ++t) {
    inputs.push_back(label_array(inputs_node[t], "inputs[" + std::to_string(t) + "]"));
  }
  IndexList output = label_array(doc["output"], "output");

  const json& sizes_node = doc["index_sizes"];
  if (!sizes_node.is_object()) throw Error("index_sizes: expected an object");
  SizeDict sizes;
  for (const auto& [label, value] : sizes_node.items()) {
    if (!value.is_number_integer()) {
      throw Error("index_sizes." + label + ": expected an integer");
    }
    sizes[label] = value.get<std::int64_t>();
  }
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    for (std::size_t k = 0; k < inputs[t].size(); ++k) {
      if (sizes.count(inputs[t][k]) == 0) {
        throw Error("inputs[" + std::to_string(t) + "][" + std::to_string(k) +
                    "]: no extent given for index '" + inputs[t][k] + "'");
      }
    }
  }

  return InstanceDocument{TensorNetwork(std::move(inputs), std::move(output), std::move(sizes)),
                          optional_string(doc, "name"), optional_string(doc, "family")};
}

TensorNetwork parse_instance_file(std::string_view bytes) {
  return parse_instance_document(bytes).network;
}

InstanceDocument read_instance_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_document(buffer.str());
}

std::string serialize_instance(const InstanceDocument& doc) {
  json out;
  out["inputs"] = doc.network.inputs();
  out["output"] = doc.network.output();
  out["index_sizes"] = doc.network.sizes();
  if (!doc.name.empty()) out["name"] = doc.name;
  if (!doc.family.empty()) out["family"] = doc.family;
  return out.dump() + "\n";
}

std::string serialize_path(const ContractionPath& path) {
  std::string out = "[";
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (t) out += ',';
    out += '[' + std::to_string(path.steps[t].first) + ',' +
           std::to_string(path.steps[t].second) + ']';
  }
  return out + "]";
}

ContractionPath parse_path(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("path is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error("path: expected an array of pairs");
  ContractionPath path;
  for (std::size_t t = 0; t < doc.size(); ++t) {
    const json& step = doc[t];
    if (!step.is_array() || step.size() != 2 || !step[0].is_number_unsigned() ||
        !step[1].is_number_unsigned()) {
      throw Error("path[" + std::to_string(t) + "]: expected a pair of non-negative integers");
    }
    path.steps.push_back({step[0].get<std::size_t>(), step[1].get<std::size_t>()});
  }
  return path;
}

}  // namespace tnpath
