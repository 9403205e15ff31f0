#include "predatw/frame_image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "predatw/error.hpp"

namespace predatw {
namespace {

double half_angle_tan(double fov_deg) { return std::tan(fov_deg * std::numbers::pi / 360.0); }

void check_dims(int width, int height) {
  if (width < 8 || height < 8 || width % 8 != 0 || height % 8 != 0)
    throw std::invalid_argument("FrameImage: width and height must be >= 8 and multiples of 8 (got " +
                                std::to_string(width) + "x" + std::to_string(height) + ")");
}

}  // namespace

void ProjectionModel::validate() const {
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0) || !(vfov_deg > 0.0 && vfov_deg < 180.0))
    throw std::invalid_argument("ProjectionModel: fields of view must lie in (0, 180) degrees");
}

double ProjectionModel::focal_x(int width) const { return (width / 2.0) / half_angle_tan(hfov_deg); }
double ProjectionModel::focal_y(int height) const { return (height / 2.0) / half_angle_tan(vfov_deg); }

ProjectionModel ProjectionModel::square_pixels(double hfov_deg, int width, int height) {
  ProjectionModel p{hfov_deg, hfov_deg};
  p.vfov_deg = 360.0 / std::numbers::pi * std::atan(half_angle_tan(hfov_deg) * height / width);
  p.validate();
  return p;
}

FrameImage::FrameImage(int width, int height, ProjectionModel projection, Rgb fill)
    : width_(width), height_(height), projection_(projection) {
  check_dims(width, height);
  projection_.validate();
  rgb_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < rgb_.size(); i += 3) {
    rgb_[i] = fill[0];
    rgb_[i + 1] = fill[1];
    rgb_[i + 2] = fill[2];
  }
}

FrameImage::FrameImage(int width, int height, ProjectionModel projection, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), projection_(projection), rgb_(std::move(rgb)) {
  check_dims(width, height);
  projection_.validate();
  if (rgb_.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("FrameImage: rgb buffer length must be 3*width*height");
}

Rgb FrameImage::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
}

void FrameImage::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  rgb_[i] = c[0];
  rgb_[i + 1] = c[1];
  rgb_[i + 2] = c[2];
}

FrameImage read_ppm(const std::filesystem::path& path, const ProjectionModel& projection) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);

  // Header tokens, skipping '#' comments.
  auto token = [&in]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
      } else {
        tok.push_back(c);
      }
    }
    return tok;
  };

  if (token() != "P6") throw ParseError(path.string() + ": not a binary PPM (P6)", 0);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw ParseError(path.string() + ": malformed PPM header", 0);
  }
  if (maxval != 255) throw ParseError(path.string() + ": only maxval 255 is supported", 0);
  if (w <= 0 || h <= 0) throw ParseError(path.string() + ": bad PPM dimensions", 0);

  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(rgb.size())) throw ParseError(path.string() + ": truncated pixel data", 0);
  return FrameImage(w, h, projection, std::move(rgb));
}

void write_ppm(const FrameImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb().data()), static_cast<std::streamsize>(image.rgb().size()));
}

}  // namespace predatw
