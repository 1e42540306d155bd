// Text formats.
//
// Instance files have three sections:
//
//   [atoms]
//   count 4
//   [domains]
//   uniform 3                 # or one "atom <id> : <size> [w0 w1 ...]" line each
//   [events]
//   mono 0 1                  # support atoms; all equal
//   repetitive 0 1 2 3        # sequence a_1..a_2n; value(a_i) == value(a_{i+n})
//   elementary 0 2 : 1 0      # support atoms : one value per atom
//   extension 0 1 : 0 0 ; 1 1 # support atoms : configs separated by ';'
//
// Event order in the file is the event id order. '#' starts a comment.
// Graph files: a "vertices <n>" line followed by "u v" edge lines.
// Face files: one face per line, its boundary vertices in cyclic order.
// Color-list files: one "u v : c1 ... ck" line per edge.
#pragma once

#include <string>
#include <vector>

#include "lll/core.hpp"
#include "lll/graph.hpp"

namespace lll {

std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

std::string serialize_graph(const SimpleGraph& g);
SimpleGraph parse_graph(const std::string& text);

FaceSet parse_faces(const SimpleGraph& g, const std::string& text);

// Per-edge color lists, indexed like g.edges(); every list must have
// exactly k entries.
std::vector<std::vector<int>> parse_color_lists(const SimpleGraph& g, int k,
                                                const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lll
