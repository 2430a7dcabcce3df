#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "mapdist/gallery.hpp"
#include "mapdist/synthetic.hpp"

namespace mapdist {

// Gallery files: UTF-8 text, first line `dim=D`, then one `label,f_1,...,f_D`
// row per instance. Probe files: JSON lines, one
// {"label": <string|integer>?, "frames": [[f_1..f_D], ...]} object per
// sequence. Writers emit 17 significant digits so binary64 round-trips.

Gallery read_gallery(std::istream& in, const std::string& source_name = "<stream>");
Gallery load_gallery(const std::filesystem::path& path);
void write_gallery(std::ostream& out, const Gallery& gallery);
void save_gallery(const std::filesystem::path& path, const Gallery& gallery);

std::vector<ProbeRecord> read_probes(std::istream& in, const std::string& source_name = "<stream>");
std::vector<ProbeRecord> load_probes(const std::filesystem::path& path);
void write_probes(std::ostream& out, std::span<const ProbeRecord> probes);
void save_probes(const std::filesystem::path& path, std::span<const ProbeRecord> probes);

}  // namespace mapdist
