#include <cmath>
#include <initializer_list>
#include <sstream>

#include "ddp/agent.hpp"
#include "ddp/errors.hpp"
#include "ddp/prompts.hpp"

namespace ddp::agent {

namespace {

using nlohmann::json;
using raster::Raster;
using raster::Rect;
using taxonomy::Tool;

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void only_keys(const json& p, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : p.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidArgument("unknown parameter '" + key + "'");
  }
}

int as_int(const json& v, const std::string& name) {
  if (v.is_number_integer()) {
    const auto i = v.get<long long>();
    if (i < -(1LL << 30) || i > (1LL << 30)) throw InvalidArgument(name + " out of range");
    return static_cast<int>(i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < (1 << 30)) {
      return static_cast<int>(d);
    }
  }
  throw InvalidArgument("parameter '" + name + "' must be an integer");
}

double as_number(const json& v, const std::string& name) {
  if (!v.is_number()) throw InvalidArgument("parameter '" + name + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidArgument("parameter '" + name + "' must be finite");
  return d;
}

int req_int(const json& p, const char* key) {
  if (!p.contains(key)) throw InvalidArgument(std::string("missing parameter '") + key + "'");
  return as_int(p[key], key);
}

int opt_int(const json& p, const char* key, int fallback) {
  return p.contains(key) ? as_int(p[key], key) : fallback;
}

double opt_number(const json& p, const char* key, double fallback) {
  return p.contains(key) ? as_number(p[key], key) : fallback;
}

Rect rect_of(const json& p) {
  return {req_int(p, "x"), req_int(p, "y"), req_int(p, "w"), req_int(p, "h")};
}

raster::Rgb color_of(const json& p, const char* key, raster::Rgb fallback) {
  if (!p.contains(key)) return fallback;
  const json& c = p[key];
  if (!c.is_array() || c.size() != 3) {
    throw InvalidArgument(std::string("parameter '") + key + "' must be [r, g, b]");
  }
  int ch[3];
  for (int i = 0; i < 3; ++i) {
    ch[i] = as_int(c[static_cast<std::size_t>(i)], key);
    if (ch[i] < 0 || ch[i] > 255) throw InvalidArgument("color channels must lie in [0, 255]");
  }
  return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
          static_cast<std::uint8_t>(ch[2])};
}

std::vector<double> number_list(const json& p, const char* key) {
  std::vector<double> out;
  if (!p.contains(key)) return out;
  if (!p[key].is_array()) throw InvalidArgument(std::string("parameter '") + key + "' must be a list");
  for (const json& v : p[key]) out.push_back(as_number(v, key));
  return out;
}

}  // namespace

Raster apply_tool(Tool tool, const json& params, const Raster& img, const ToolDefaults& defaults) {
  if (!params.is_object()) throw InvalidArgument("params must be a JSON object");
  const json& p = params;
  switch (tool) {
    case Tool::kCrop:
      only_keys(p, {"x", "y", "w", "h"});
      return raster::crop(img, rect_of(p));
    case Tool::kWhiteMask: {
      only_keys(p, {"x", "y", "w", "h"});
      const Rect keep = rect_of(p);
      raster::validate(keep, img);
      return raster::apply_white_mask(
          img, raster::BinaryMask::from_rect(img.width(), img.height(), keep));
    }
    case Tool::kRedBox:
      only_keys(p, {"x", "y", "w", "h", "thickness"});
      return raster::draw_red_box(img, rect_of(p), opt_int(p, "thickness", 2));
    case Tool::kCartesianAuxline: {
      only_keys(p, {"lines"});
      if (!p.contains("lines") || !p["lines"].is_array()) {
        throw InvalidArgument("parameter 'lines' must be a list");
      }
      std::vector<raster::LineSpec> lines;
      for (const json& l : p["lines"]) {
        if (!l.is_object()) throw InvalidArgument("each line must be an object");
        only_keys(l, {"orientation", "position", "thickness", "color"});
        raster::LineSpec spec;
        const std::string o = l.value("orientation", "");
        if (o == "horizontal") {
          spec.orientation = raster::Orientation::kHorizontal;
        } else if (o == "vertical") {
          spec.orientation = raster::Orientation::kVertical;
        } else {
          throw InvalidArgument("line orientation must be 'horizontal' or 'vertical'");
        }
        spec.position = req_int(l, "position");
        spec.thickness = opt_int(l, "thickness", 2);
        spec.color = color_of(l, "color", raster::kGreen);
        lines.push_back(spec);
      }
      return raster::draw_cartesian_auxlines(img, lines);
    }
    case Tool::kPolarAuxline: {
      only_keys(p, {"cx", "cy", "radii", "angles", "spoke_length", "thickness", "color"});
      raster::PolarSpec spec;
      spec.cx = req_int(p, "cx");
      spec.cy = req_int(p, "cy");
      spec.radii = number_list(p, "radii");
      spec.angles_deg = number_list(p, "angles");
      // Without an explicit length, spokes run to the farthest image corner.
      const double diag = std::hypot(img.width(), img.height());
      spec.spoke_length = opt_number(p, "spoke_length", diag);
      spec.thickness = opt_int(p, "thickness", 2);
      spec.color = color_of(p, "color", raster::kGreen);
      return raster::draw_polar_auxlines(img, spec);
    }
    case Tool::kBlurMask: {
      only_keys(p, {"keep", "sigma"});
      std::optional<Rect> keep;
      if (p.contains("keep") && !p["keep"].is_null()) {
        if (!p["keep"].is_object()) throw InvalidArgument("'keep' must be a rect object");
        only_keys(p["keep"], {"x", "y", "w", "h"});
        keep = rect_of(p["keep"]);
      }
      const double sigma = opt_number(p, "sigma", defaults.heavy_sigma);
      if (!(sigma > defaults.sigma1)) {
        throw InvalidArgument("blur sigma must exceed the smoothing sigma " +
                              fmt_double(defaults.sigma1));
      }
      return raster::apply_blur_mask(img, keep, sigma);
    }
    case Tool::kEnhanceContrast: {
      only_keys(p, {"p_low", "p_high"});
      return raster::enhance_contrast(img, opt_number(p, "p_low", raster::kDefaultContrastLow),
                                      opt_number(p, "p_high", raster::kDefaultContrastHigh));
    }
  }
  throw InvalidArgument("unknown tool");
}

std::string tool_schema_text(Tool tool, const ToolDefaults& defaults) {
  return assets::render(assets::prompt("tool_" + std::string(taxonomy::tool_name(tool))),
                        {{"heavy_sigma", fmt_double(defaults.heavy_sigma)},
                         {"sigma1", fmt_double(defaults.sigma1)}});
}

}  // namespace ddp::agent
