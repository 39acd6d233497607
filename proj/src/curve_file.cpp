#include "namedcurves/curve_file.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "namedcurves/error.hpp"

namespace namedcurves {

namespace {

constexpr int kSignificantDigits = 17;

[[noreturn]] void malformed(int line, const std::string& msg) {
  throw Error(ErrorKind::kMalformedFile, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view tok, double& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

template <typename Enum, int N>
bool lookup(std::string_view tok, Enum& out) {
  for (int i = 0; i < N; ++i) {
    if (name_of(static_cast<Enum>(i)) == tok) {
      out = static_cast<Enum>(i);
      return true;
    }
  }
  return false;
}

}  // namespace

std::string format_double(double v, int significant_digits) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                       std::chars_format::general, significant_digits);
  return std::string(buf.data(), ptr);
}

std::string format_shortest(double v) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string serialize_curves(const CurveSet& curves) {
  std::string out = "NCV 1 " + std::to_string(curves.control_points()) + "\n";
  for (int g = 0; g < kNumColorGroups; ++g) {
    for (int c = 0; c < kNumChannels; ++c) {
      const auto group = static_cast<ColorGroup>(g);
      const auto channel = static_cast<Channel>(c);
      out += name_of(group);
      out += ' ';
      out += name_of(channel);
      for (double v : curves.curve(group, channel).points) {
        out += ' ';
        out += format_double(v, kSignificantDigits);
      }
      out += '\n';
    }
  }
  return out;
}

CurveSet parse_curves(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  int line_no = 0;
  int m = 0;
  std::size_t i = 0;
  // Header: first non-blank line.
  for (; i < lines.size(); ++i) {
    const auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    line_no = static_cast<int>(i) + 1;
    if (toks.size() != 3 || toks[0] != "NCV") malformed(line_no, "expected header 'NCV 1 <M>'");
    if (toks[1] != "1") malformed(line_no, "unsupported version " + std::string(toks[1]));
    const auto [ptr, ec] = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), m);
    if (ec != std::errc() || ptr != toks[2].data() + toks[2].size() || m < 2 ||
        m > kMaxControlPoints) {
      malformed(line_no, "bad control point count '" + std::string(toks[2]) + "'");
    }
    ++i;
    break;
  }
  if (m == 0) malformed(1, "missing header");

  CurveSet curves(m);
  std::array<std::array<bool, kNumChannels>, kNumColorGroups> seen{};
  int records = 0;
  for (; i < lines.size(); ++i) {
    const auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    line_no = static_cast<int>(i) + 1;
    ColorGroup group;
    Channel channel;
    if (!lookup<ColorGroup, kNumColorGroups>(toks[0], group)) {
      malformed(line_no, "unknown group '" + std::string(toks[0]) + "'");
    }
    if (toks.size() < 2 || !lookup<Channel, kNumChannels>(toks[1], channel)) {
      malformed(line_no, "unknown or missing channel");
    }
    if (toks.size() != static_cast<std::size_t>(m) + 2) {
      malformed(line_no, "expected " + std::to_string(m) + " values, found " +
                             std::to_string(toks.size() - 2));
    }
    auto& flag = seen[static_cast<int>(group)][static_cast<int>(channel)];
    if (flag) {
      malformed(line_no, "duplicate record " + std::string(toks[0]) + " " + std::string(toks[1]));
    }
    flag = true;
    ControlPoints cp;
    cp.points.resize(m);
    for (int k = 0; k < m; ++k) {
      if (!parse_number(toks[k + 2], cp.points[k])) {
        malformed(line_no, "bad number '" + std::string(toks[k + 2]) + "'");
      }
    }
    try {
      curves.set_curve(group, channel, std::move(cp));
    } catch (const Error& e) {
      malformed(line_no, std::string(toks[0]) + " " + std::string(toks[1]) + ": " + e.what());
    }
    ++records;
  }
  if (records != kNumColorGroups * kNumChannels) {
    malformed(line_no, "expected 18 curve records, found " + std::to_string(records));
  }
  return curves;
}

CurveSet read_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, "cannot open curve file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curves(ss.str());
}

void write_curve_file(const CurveSet& curves, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_curves(curves));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIoError, "cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::kIoError, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::kIoError, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

}  // namespace namedcurves
