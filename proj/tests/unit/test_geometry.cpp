#include <cmath>
#include <random>

#include "doctest.h"
#include "guiprep/geometry.h"

using namespace guiprep;

namespace {

// Floating-point restatement of the relative mapping, used as an oracle for
// the integer implementation.
int oracle_relative(int v, int extent) {
  const double r = std::round(static_cast<double>(v) * 1000.0 / extent);
  return static_cast<int>(std::fmin(std::fmax(r, 0.0), 1000.0));
}

int oracle_pixel(double unit, int extent) {
  const double p = std::round(unit * extent);
  return static_cast<int>(std::fmin(std::fmax(p, 0.0), extent - 1.0));
}

}  // namespace

TEST_CASE("to_relative maps pixels onto the 0..1000 grid") {
  const ScreenSize hd(1920, 1080);
  CHECK(to_relative({0, 0}, hd) == RelPoint{0, 0});
  CHECK(to_relative({960, 540}, hd) == RelPoint{500, 500});

  // (1919,1079): 999.479 and 999.074 both round down.
  const RelPoint corner{oracle_relative(1919, 1920), oracle_relative(1079, 1080)};
  CHECK(corner == RelPoint{999, 999});
  CHECK(to_relative({1919, 1079}, hd) == corner);
}

TEST_CASE("to_relative rounds ties away from zero") {
  // 1/2000 * 1000 = 0.5 exactly.
  CHECK(to_relative({1, 0}, ScreenSize(2000, 10)).x == 1);
  // 3/2000 * 1000 = 1.5.
  CHECK(to_relative({3, 0}, ScreenSize(2000, 10)).x == 2);
}

TEST_CASE("to_relative rejects points outside the screen and names the axis") {
  const ScreenSize s(100, 50);
  try {
    to_relative({100, 10}, s);
    FAIL("expected OutOfBoundsError");
  } catch (const OutOfBoundsError& e) {
    CHECK(e.axis() == 'x');
  }
  try {
    to_relative({10, -1}, s);
    FAIL("expected OutOfBoundsError");
  } catch (const OutOfBoundsError& e) {
    CHECK(e.axis() == 'y');
  }
  CHECK_THROWS_AS(normalize_point({0, 50}, s), OutOfBoundsError);
}

TEST_CASE("to_unit divides by 1000 exactly") {
  CHECK(to_unit({0, 0}) == NormPoint::from_milli(0, 0));
  const NormPoint one = to_unit({1000, 1000});
  CHECK(one.x() == 1.0);
  CHECK(one.y() == 1.0);
  const NormPoint p = to_unit({347, 982});
  CHECK(p.x() == 0.347);
  CHECK(p.y() == 0.982);
  CHECK_THROWS_AS(to_unit({1001, 0}), std::out_of_range);
}

TEST_CASE("normalize_point composes relative and unit steps") {
  const ScreenSize hd(1920, 1080);
  CHECK(normalize_point({960, 540}, hd) == NormPoint::quantize(0.5, 0.5));
  CHECK(normalize_point({0, 1079}, hd) == NormPoint::from_milli(0, 999));
  CHECK(normalize_point({500, 500}, ScreenSize(1000, 1000)) ==
        NormPoint::from_milli(500, 500));
}

TEST_CASE("denormalize rounds and clamps to the last pixel") {
  const ScreenSize hd(1920, 1080);
  CHECK(denormalize(NormPoint::from_milli(500, 500), hd) == PixelPoint{960, 540});
  CHECK(denormalize(NormPoint::from_milli(1000, 1000), hd) ==
        PixelPoint{1919, 1079});

  const ScreenSize small(800, 600);
  const PixelPoint expect{oracle_pixel(0.347, 800), oracle_pixel(0.982, 600)};
  CHECK(expect == PixelPoint{278, 589});
  CHECK(denormalize(NormPoint::from_milli(347, 982), small) == expect);
}

TEST_CASE("box_center floors odd spans") {
  CHECK(box_center({10, 10, 30, 30}) == PixelPoint{20, 20});
  CHECK(box_center({0, 0, 0, 0}) == PixelPoint{0, 0});
  CHECK(box_center({5, 8, 10, 13}) ==
        PixelPoint{static_cast<int>(std::floor(15 / 2.0)),
                   static_cast<int>(std::floor(21 / 2.0))});
  CHECK(box_center({5, 8, 10, 13}) == PixelPoint{7, 10});
}

TEST_CASE("point_in_box is inclusive") {
  const ScreenSize hd(1920, 1080);
  CHECK(point_in_box(NormPoint::from_milli(500, 500), {900, 500, 1020, 580}, hd));
  CHECK_FALSE(point_in_box(NormPoint::from_milli(0, 0), {10, 10, 30, 30}, hd));

  // A corner that survives the normalize/denormalize trip exactly.
  const ScreenSize s(1000, 1000);
  const BBox b{100, 200, 300, 400};
  CHECK(point_in_box(normalize_point({b.x1, b.y1}, s), b, s));
  CHECK(point_in_box(normalize_point({b.x2, b.y2}, s), b, s));
  CHECK_FALSE(point_in_box(normalize_point({b.x2 + 1, b.y2}, s), b, s));
}

TEST_CASE("property: integer mapping agrees with the floating-point oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(1, 4096);
  for (int i = 0; i < 5000; ++i) {
    const int w = dim(rng);
    const int h = dim(rng);
    const int x = std::uniform_int_distribution<int>(0, w - 1)(rng);
    const int y = std::uniform_int_distribution<int>(0, h - 1)(rng);
    const RelPoint r = to_relative({x, y}, ScreenSize(w, h));
    REQUIRE(r.x == oracle_relative(x, w));
    REQUIRE(r.y == oracle_relative(y, h));
  }
}

TEST_CASE("property: monotone along each axis and box centers stay inside") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dim(1, 4096);
  for (int i = 0; i < 2000; ++i) {
    const ScreenSize s(dim(rng), dim(rng));
    const int a = std::uniform_int_distribution<int>(0, s.width() - 1)(rng);
    const int b = std::uniform_int_distribution<int>(0, s.width() - 1)(rng);
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    REQUIRE(to_relative({lo, 0}, s).x <= to_relative({hi, 0}, s).x);

    const int c = std::uniform_int_distribution<int>(0, s.height() - 1)(rng);
    const int d = std::uniform_int_distribution<int>(0, s.height() - 1)(rng);
    const BBox box{lo, std::min(c, d), hi, std::max(c, d)};
    const PixelPoint center = box_center(box);
    REQUIRE(center.x >= box.x1);
    REQUIRE(center.x <= box.x2);
    REQUIRE(center.y >= box.y1);
    REQUIRE(center.y <= box.y2);
  }
}

TEST_CASE("NormPoint quantizes to the nearest thousandth") {
  CHECK(NormPoint::quantize(0.1234, 0.9996) == NormPoint::from_milli(123, 1000));
  CHECK_THROWS_AS(NormPoint::quantize(-0.01, 0.5), std::out_of_range);
  CHECK_THROWS_AS(NormPoint::quantize(0.5, std::nan("")), std::out_of_range);
  CHECK(format_milli(347) == "0.347");
  CHECK(format_milli(1000) == "1.000");
  CHECK(format_milli(5) == "0.005");
}

TEST_CASE("ScreenSize rejects non-positive dimensions") {
  CHECK_THROWS_AS(ScreenSize(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(ScreenSize(10, -1), std::invalid_argument);
}
