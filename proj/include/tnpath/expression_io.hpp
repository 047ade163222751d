#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "tnpath/network.hpp"

namespace tnpath {

/// Parses "ijk,kln->ijln": single-character labels, whitespace ignored.
TensorNetwork parse_einsum_string(std::string_view text, const SizeDict& sizes);

/// Parses "i=3,j=2".
SizeDict parse_sizes(std::string_view text);

/// Instance file contents:
///   {"inputs": [["a","b"], ...], "output": ["a"], "index_sizes": {"a": 2, ...},
///    "name": "...", "family": "..."}
/// name and family are optional.
struct InstanceDocument {
  TensorNetwork network;
  std::string name;
  std::string family;
};

InstanceDocument parse_instance_document(std::string_view bytes);
TensorNetwork parse_instance_file(std::string_view bytes);
InstanceDocument read_instance_file(const std::filesystem::path& file);
std::string serialize_instance(const InstanceDocument& doc);

/// Linear pair-list text, e.g. "[[2,3],[0,1],[0,1]]".
std::string serialize_path(const ContractionPath& path);
ContractionPath parse_path(std::string_view text);

}  // namespace tnpath
