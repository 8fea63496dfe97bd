#pragma once

#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "polyscat/farfield.hpp"
#include "polyscat/geometry.hpp"
#include "polyscat/media.hpp"

namespace polyscat::io {

using nlohmann::json;

// FNV-1a 64-bit content hashes, printed as 16 hex digits.
std::string hash_bytes(const std::string& bytes);
std::string hash_file(const std::string& path);

// Geometry documents:
//   {"dimension": n, "d0": ..., "cells": [{"vertices": [[..],..]} | null, ..],
//    "ordering": [..]?}                       for partitions,
//   {"dimension": n, "m0": ..., "shells": [...]}  for nested families.
CellPartition parse_cell_partition(const json& doc);
NestedFamily parse_nested_family(const json& doc);
json to_json(const CellPartition& part);
json to_json(const NestedFamily& fam);

// Potential documents extend the geometry schema with "values": [[re, im],..]
// per cell/shell, or select a built-in analytic shape:
//   {"builtin": "disc"|"ball", "center": [..], "radius": r, "value": [re,im]}
//   {"builtin": "square"|"cube", "lo": [..], "hi": [..], "value": [re,im]}
//   {"builtin": "lshape", "size": s, "value": [re,im]}
//   {"builtin": "pixels", "rows": r, "cols": c, "side": a, "d0": d,
//    "values": [[re,im], ...]}
std::unique_ptr<Potential> parse_potential(const json& doc);

// Far-field pattern CSV: columns theta[,phi],re,im with a # header line
// recording k, the incident direction and the geometry hash.
void write_pattern_csv(const std::string& path, const FarFieldPattern& a,
                       const std::string& geometry_hash);

// Field dump: ASCII header lines (magic, n, R, h, counts, k, d) followed by
// little-endian float64 pairs (re, im) of u^s then u, grid order x-fastest.
void write_field_dump(const std::string& path, const FieldSolution& sol);

// One JSON object per line, exactly as serialized (deterministic).
void write_json_lines(const std::string& path, const std::vector<json>& records);
std::vector<json> read_json_lines(const std::string& path);

// Run manifest listing every artifact with its content hash; wall time is
// recorded here and nowhere else, so result ledgers stay byte-reproducible.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& config_hash, double wall_ms,
                    const std::vector<std::string>& artifact_paths);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace polyscat::io
