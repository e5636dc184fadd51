#pragma once
// Newline-delimited JSON instance and update-stream files. Doubles are
// emitted with shortest round-trip formatting, so read(write(S)) reproduces
// the exact bit patterns and write(read(F)) is byte-stable on normalized
// files.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoapprox/geom.hpp"

namespace geo {

struct IoError : std::runtime_error {
  size_t line;  // 1-based line number in the offending file
  IoError(size_t line_no, const std::string& msg);
};

// record: {"id":N,"kind":"box","lo":[..],"hi":[..],"weight":w,"color":"A"}
//         {"id":N,"kind":"disk","center":[..],"radius":r,"weight":w}
ObjectSet read_instance(std::istream& in);
ObjectSet read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const ObjectSet& s);
void write_instance_file(const std::string& path, const ObjectSet& s);

struct UpdateOp {
  bool is_insert = true;
  GeomObject obj;   // valid when is_insert
  int64_t id = -1;  // valid when !is_insert
};

struct UpdateStream {
  std::vector<UpdateOp> ops;
  std::vector<size_t> checkpoints;  // op counts after which validation runs
};

// op records plus {"op":"checkpoint"} markers
UpdateStream read_stream(std::istream& in);
UpdateStream read_stream_file(const std::string& path);
void write_stream(std::ostream& out, const UpdateStream& s);
void write_stream_file(const std::string& path, const UpdateStream& s);

// replay the first `upto` ops (all when upto == npos) and return the live set
ObjectSet live_set(const UpdateStream& s, size_t upto = static_cast<size_t>(-1));

}  // namespace geo
