#include "mapdist/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mapdist/error.hpp"

namespace mapdist {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return {buf, static_cast<std::size_t>(len)};
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void strip_bom(std::string& line) {
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
}

}  // namespace

Gallery read_gallery(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<std::pair<std::string, FeatureVector>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    const std::string_view text = trim(line);
    if (text.empty()) continue;

    if (!have_header) {
      if (!text.starts_with("dim=")) {
        throw ParseError(source_name, line_no, "expected header `dim=D`");
      }
      double d = 0.0;
      if (!parse_double(text.substr(4), d) || d < 2 || d != static_cast<double>(static_cast<std::size_t>(d))) {
        throw ParseError(source_name, line_no, "header dim must be an integer >= 2");
      }
      dim = static_cast<std::size_t>(d);
      have_header = true;
      continue;
    }

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != dim + 1) {
      throw ParseError(source_name, line_no,
                       "expected label and " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1) + " values");
    }
    const std::string label(trim(fields[0]));
    if (label.empty()) throw ParseError(source_name, line_no, "empty label");
    std::vector<double> values(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_double(fields[d + 1], values[d])) {
        throw ParseError(source_name, line_no,
                         "cannot parse value " + std::to_string(d + 1) + ": `" +
                             std::string(trim(fields[d + 1])) + "`");
      }
    }
    try {
      rows.emplace_back(label, FeatureVector(std::move(values)));
    } catch (const Error& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyGallery, source_name + " contains no instances");
  return Gallery::from_named(std::move(rows));
}

Gallery load_gallery(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_gallery(in, path.string());
}

void write_gallery(std::ostream& out, const Gallery& gallery) {
  out << "dim=" << gallery.dim() << '\n';
  for (std::size_t r = 0; r < gallery.size(); ++r) {
    const std::string& name = gallery.class_name(gallery.label(r));
    if (name.find_first_of(",\r\n") != std::string::npos || trim(name) != name || name.empty()) {
      throw Error(ErrorCode::InvalidConfig, "class name `" + name + "` cannot be written as CSV");
    }
    out << name;
    for (double x : gallery.instance(r).values()) out << ',' << format_double(x);
    out << '\n';
  }
}

void save_gallery(const std::filesystem::path& path, const Gallery& gallery) {
  auto out = open_output(path);
  write_gallery(out, gallery);
}

std::vector<ProbeRecord> read_probes(std::istream& in, const std::string& source_name) {
  std::vector<ProbeRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    if (trim(line).empty()) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source_name, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(source_name, line_no, "record is not a JSON object");

    std::optional<std::string> label;
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
      if (it->is_string()) {
        label = it->get<std::string>();
      } else if (it->is_number_integer()) {
        label = it->dump();
      } else {
        throw ParseError(source_name, line_no, "label must be a string or an integer");
      }
    }

    const auto frames_it = obj.find("frames");
    if (frames_it == obj.end()) throw ParseError(source_name, line_no, "record has no `frames`");
    if (!frames_it->is_array() || frames_it->empty()) {
      throw ParseError(source_name, line_no, "`frames` must be a nonempty array");
    }
    std::vector<FeatureVector> frames;
    for (const auto& frame : *frames_it) {
      if (!frame.is_array()) throw ParseError(source_name, line_no, "each frame must be an array");
      std::vector<double> values;
      values.reserve(frame.size());
      for (const auto& x : frame) {
        if (!x.is_number()) throw ParseError(source_name, line_no, "frame values must be numbers");
        values.push_back(x.get<double>());
      }
      try {
        frames.emplace_back(std::move(values));
      } catch (const Error& e) {
        throw ParseError(source_name, line_no, e.what());
      }
    }
    try {
      records.push_back({ProbeSequence(std::move(frames)), std::move(label)});
    } catch (const Error& e) {
      throw Error(e.code(), source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ProbeRecord> load_probes(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_probes(in, path.string());
}

void write_probes(std::ostream& out, std::span<const ProbeRecord> probes) {
  for (const auto& rec : probes) {
    out << '{';
    if (rec.label) out << "\"label\":" << json(*rec.label).dump() << ',';
    out << "\"frames\":[";
    for (std::size_t t = 0; t < rec.sequence.size(); ++t) {
      if (t) out << ',';
      out << '[';
      const auto values = rec.sequence[t].values();
      for (std::size_t d = 0; d < values.size(); ++d) {
        if (d) out << ',';
        out << format_double(values[d]);
      }
      out << ']';
    }
    out << "]}\n";
  }
}

void save_probes(const std::filesystem::path& path, std::span<const ProbeRecord> probes) {
  auto out = open_output(path);
  write_probes(out, probes);
}

}  // namespace mapdist
