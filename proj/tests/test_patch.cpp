#include "delone/error.hpp"
#include "delone/generators.hpp"
#include "delone/patch.hpp"
#include "doctest.h"

using namespace delone;

namespace {

WindowedDeloneSet integers(double W) {
  std::vector<Vec> pts;
  for (int k = -static_cast<int>(W); k <= static_cast<int>(W); ++k) pts.push_back({static_cast<double>(k), 0.0});
  return WindowedDeloneSet::build(pts, 1, W);
}

}  // namespace

TEST_CASE("patches are open balls") {
  const auto Z = integers(20);
  const Patch P = extract_patch(Z, {0.0, 0.0}, 2.0);
  CHECK(P.size() == 3);  // -1, 0, 1; ±2 sit on the boundary
  const Patch Q = extract_patch(Z, {0.5, 0.0}, 1.0);
  CHECK(Q.size() == 2);
  CHECK(Q.offsets[0].x == doctest::Approx(-0.5));
  CHECK_THROWS_AS(extract_patch(Z, {19.0, 0.0}, 2.0), Error);
}

TEST_CASE("translation classes ignore the center, centered classes do not") {
  const auto Z = integers(20);
  const Patch a = extract_patch(Z, {0.0, 0.0}, 1.5);
  const Patch b = extract_patch(Z, {5.0, 0.0}, 1.5);
  const Patch c = extract_patch(Z, {5.2, 0.0}, 1.5);
  CHECK(same_class(canonical_class(a), canonical_class(b)));
  CHECK(same_class(canonical_class(a, Equivalence::Centered), canonical_class(b, Equivalence::Centered)));
  // Same three points, ball center moved.
  REQUIRE(c.size() == 3);
  CHECK(same_class(canonical_class(a), canonical_class(c)));
  CHECK_FALSE(same_class(canonical_class(a, Equivalence::Centered), canonical_class(c, Equivalence::Centered)));
  const auto v = patch_translation_match(a, b);
  REQUIRE(v.has_value());
  CHECK(norm(*v) < 1e-12);
  CHECK(center_shift(a, b).x == doctest::Approx(5.0));
}

TEST_CASE("labels separate classes") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 200);
  ClassIndex labeled(Equivalence::Centered), plain(Equivalence::Centered);
  for (std::size_t i : F.interior(3.0)) {
    if (F.label(i) == kNoLabel) continue;
    Patch p = extract_patch(F, F.point(i), 1.2);
    labeled.add(p);
    p.labels.clear();
    plain.add(p);
  }
  // Radius 1.2 sees the gaps on both sides; labels carry the gap to the right
  // of the neighbor too, so labeled classes refine the plain ones.
  CHECK(plain.size() == 3);
  CHECK(labeled.size() >= plain.size());
}

TEST_CASE("subpatches and restriction") {
  const auto Z = integers(30);
  const Patch big = extract_patch(Z, {0.0, 0.0}, 6.0);
  const Patch small = extract_patch(Z, {0.0, 0.0}, 2.5);
  const auto u = is_subpatch(small, big);
  REQUIRE(u.has_value());
  CHECK(norm(*u) < 1e-12);
  const Patch r = restrict_patch(big, 2.5);
  CHECK(same_class(canonical_class(r, Equivalence::Centered), canonical_class(small, Equivalence::Centered)));
  CHECK_THROWS_AS(canonical_class(Patch{}), Error);
}

TEST_CASE("class index finalizes deterministically") {
  const auto F = generate_substitution_1d(fibonacci_rule(), 300).unlabeled();
  ClassIndex a, b;
  const auto idx = F.interior(6.0);
  for (std::size_t i : idx) a.add(extract_patch(F, F.point(i), 4.0));
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) b.add(extract_patch(F, F.point(*it), 4.0));
  a.finalize();
  b.finalize();
  REQUIRE(a.size() == b.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    CHECK(a[c].quantized_key == b[c].quantized_key);
    CHECK(a[c].multiplicity == b[c].multiplicity);
  }
}
