#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ncwnnm/errors.hpp"
#include "ncwnnm/metrics.hpp"
#include "support.hpp"

using namespace ncw;

TEST_CASE("psnr examples") {
  const Image a = testing::random_image(16, 16, 1, 20.0, 200.0);
  CHECK(is_exact(psnr(a, a)));
  CHECK(format_psnr(psnr(a, a)) == "exact");

  const Image b = a + Image(16, 16, 16.0);
  CHECK(mse(a, b) == doctest::Approx(256.0));
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(65025.0 / 256.0)));
  CHECK(psnr(a, b) == doctest::Approx(24.05).epsilon(1e-3));
  CHECK(format_psnr(psnr(a, b)) == "24.0484");
  CHECK(format_psnr(std::nan("")).empty());

  const Image c = testing::random_image(16, 16, 2);
  CHECK(psnr(a, c) == psnr(c, a));
  const Image shift(16, 16, 37.5);
  CHECK(psnr(a + shift, c + shift) == doctest::Approx(psnr(a, c)).epsilon(1e-12));

  CHECK_THROWS_AS(psnr(a, Image(16, 15)), DataError);
}

TEST_CASE("psnr falls as noise grows") {
  const Image ref = testing::random_image(32, 32, 3);
  Rng rng(4);
  double previous = std::numeric_limits<double>::infinity();
  for (const double sigma : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    double sum = 0.0;
    for (int t = 0; t < 20; ++t) {
      Image noisy = ref;
      for (double& v : noisy.pixels()) v += sigma * rng.normal();
      sum += psnr(noisy, ref);
    }
    CHECK(sum / 20.0 < previous);
    previous = sum / 20.0;
  }
}

TEST_CASE("report csv") {
  const Image a(4, 4, 10.0), b(4, 4, 12.0);
  std::ostringstream out;
  write_report_csv(out, {evaluate(a, b, "x.pgm", "ref.pgm", "NCW-NNM"), evaluate(b, b, "ref.pgm", "ref.pgm", "NNM")});
  CHECK(out.str() ==
        "image,reference,method,psnr,mse\n"
        "x.pgm,ref.pgm,NCW-NNM,42.1102,4.000000\n"
        "ref.pgm,ref.pgm,NNM,exact,0.000000\n");
}
