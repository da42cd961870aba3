#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "alice/metrics.hpp"
#include "alice/rng.hpp"

using alice::Error;
using alice::ErrorCode;
using alice::Rng;
using alice::SessionResult;

namespace {

SessionResult make_result(int index, std::vector<int> space,
                          std::vector<std::pair<int, int>> pairs) {
  SessionResult r;
  r.index = index;
  r.label_space = std::move(space);
  r.pairs = std::move(pairs);
  return r;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("average_accuracy basic cases") {
  SessionResult perfect = make_result(0, {0, 1, 2}, {{0, 0}, {1, 1}, {2, 2}});
  CHECK(alice::average_accuracy(perfect) == doctest::Approx(1.0));

  // 60 base classes fully correct, 5 incremental classes fully wrong:
  // macro accuracy 60/65 = 92.3%.
  std::vector<int> space;
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < 65; ++c) {
    space.push_back(c);
    pairs.emplace_back(c, c < 60 ? c : 0);
  }
  const double biased = alice::average_accuracy(make_result(8, space, pairs));
  CHECK(std::fabs(100.0 * biased - 92.3) < 0.05);

  SessionResult uneven = make_result(0, {0, 1}, {{0, 0}, {1, 1}, {1, 0}});
  CHECK(alice::average_accuracy(uneven) == doctest::Approx(0.75));

  SessionResult missing = make_result(0, {0, 1}, {{0, 0}});
  CHECK_THROWS_AS(alice::average_accuracy(missing), Error);
  try {
    alice::average_accuracy(missing);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingClass);
  }
}

TEST_CASE("harmonic_accuracy basic cases") {
  const std::set<int> base = {0, 1};

  // Perfect base, zero incremental -> 0.
  SessionResult biased = make_result(1, {0, 1, 2}, {{0, 0}, {1, 1}, {2, 0}});
  CHECK(alice::harmonic_accuracy(biased, base) == doctest::Approx(0.0));

  // Ab = Ai = 0.5 -> 0.5.
  SessionResult even = make_result(
      1, {0, 1, 2, 3}, {{0, 0}, {0, 1}, {1, 1}, {1, 0}, {2, 2}, {2, 3}, {3, 3}, {3, 2}});
  CHECK(alice::harmonic_accuracy(even, base) == doctest::Approx(0.5));

  // Ab = 0.6, Ai = 0.3 -> 0.4.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 10; ++i) pairs.emplace_back(0, i < 6 ? 0 : 1);
  for (int i = 0; i < 10; ++i) pairs.emplace_back(2, i < 3 ? 2 : 0);
  SessionResult mixed = make_result(1, {0, 2}, pairs);
  CHECK(alice::harmonic_accuracy(mixed, {0}) == doctest::Approx(0.4));

  SessionResult base_only = make_result(0, {0, 1}, {{0, 0}, {1, 1}});
  CHECK_THROWS_AS(alice::harmonic_accuracy(base_only, base), Error);
  try {
    alice::harmonic_accuracy(base_only, base);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoIncrementalClasses);
  }
}

TEST_CASE("harmonic mean bounds") {
  Rng rng(81);
  for (int i = 0; i < 200; ++i) {
    // Construct a session with controllable per-group accuracies.
    const int base_correct = static_cast<int>(rng.uniform_index(11));
    const int incr_correct = static_cast<int>(rng.uniform_index(11));
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < 10; ++j) pairs.emplace_back(0, j < base_correct ? 0 : 1);
    for (int j = 0; j < 10; ++j) pairs.emplace_back(1, j < incr_correct ? 1 : 0);
    const SessionResult r = make_result(1, {0, 1}, pairs);
    const double a_b = base_correct / 10.0;
    const double a_i = incr_correct / 10.0;
    const double a_h = alice::harmonic_accuracy(r, {0});

    CHECK(a_h <= (a_b + a_i) / 2.0 + 1e-12);
    CHECK(a_h <= 2.0 * std::min(a_b, a_i) + 1e-12);
    if (std::min(a_b, a_i) == 0.0) {
      CHECK(a_h == 0.0);
    } else {
      CHECK(a_h > 0.0);
    }
    if (base_correct == incr_correct) {
      CHECK(a_h == doctest::Approx((a_b + a_i) / 2.0));
    }
  }
}

TEST_CASE("performance_drop") {
  CHECK(alice::performance_drop({0.790, 0.705, 0.541}) == doctest::Approx(0.249).epsilon(1e-12));
  CHECK(alice::performance_drop({0.5, 0.5, 0.5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(alice::performance_drop({0.5}), Error);
  try {
    alice::performance_drop({0.5});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSessions);
  }
}

TEST_CASE("confusion_matrix basic cases") {
  const SessionResult perfect = make_result(0, {0, 1, 2}, {{0, 0}, {1, 1}, {2, 2}, {2, 2}});
  const auto diag = alice::confusion_matrix(perfect, {0, 1, 2});
  long total = 0;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      total += diag[r][c];
      if (r != c) CHECK(diag[r][c] == 0);
    }
  }
  CHECK(total == 4);  // conservation

  const SessionResult swapped = make_result(0, {0, 1}, {{0, 1}, {0, 1}, {1, 0}});
  const auto anti = alice::confusion_matrix(swapped, {0, 1});
  CHECK(anti[0][0] == 0);
  CHECK(anti[0][1] == 2);
  CHECK(anti[1][0] == 1);
  CHECK(anti[1][1] == 0);

  CHECK_THROWS_AS(alice::confusion_matrix(swapped, {0}), Error);
  try {
    alice::confusion_matrix(swapped, {0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownLabel);
  }
}

TEST_CASE("metrics are invariant under pair permutation and match the confusion matrix") {
  Rng rng(82);
  std::vector<std::pair<int, int>> pairs;
  const std::vector<int> space = {0, 1, 2, 3};
  for (int i = 0; i < 60; ++i) {
    pairs.emplace_back(static_cast<int>(rng.uniform_index(4)),
                       static_cast<int>(rng.uniform_index(4)));
  }
  for (int c = 0; c < 4; ++c) pairs.emplace_back(c, c);  // every class covered

  const SessionResult ordered = make_result(1, space, pairs);
  std::vector<std::pair<int, int>> shuffled = pairs;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
  }
  const SessionResult permuted = make_result(1, space, shuffled);

  CHECK(alice::average_accuracy(ordered) == alice::average_accuracy(permuted));
  CHECK(alice::harmonic_accuracy(ordered, {0, 1}) == alice::harmonic_accuracy(permuted, {0, 1}));
  CHECK(alice::confusion_matrix(ordered, space) == alice::confusion_matrix(permuted, space));

  // average_accuracy equals the confusion-derived per-class mean exactly.
  const auto cm = alice::confusion_matrix(ordered, space);
  double macro = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    long row_total = 0;
    for (long v : cm[r]) row_total += v;
    macro += static_cast<double>(cm[r][r]) / static_cast<double>(row_total);
  }
  macro /= 4.0;
  CHECK(alice::average_accuracy(ordered) == doctest::Approx(macro).epsilon(1e-12));
}

TEST_CASE("report rendering and parsing round trip") {
  std::vector<SessionResult> results;
  results.push_back(make_result(0, {0, 1}, {{0, 0}, {1, 1}}));
  results.push_back(make_result(1, {0, 1, 2}, {{0, 0}, {1, 0}, {2, 2}}));
  const alice::MetricsReport report = alice::build_report(results, {0, 1});

  REQUIRE(report.sessions.size() == 2);
  CHECK(!report.sessions[0].harmonic.has_value());
  CHECK(report.sessions[1].harmonic.has_value());
  REQUIRE(report.pd.has_value());
  // Session 0 average 1.0; session 1 per-class accuracies 1, 0, 1 -> 2/3.
  CHECK(*report.pd == doctest::Approx(1.0 / 3.0));

  const std::string csv = alice::render_report_csv(report);
  const alice::ParsedReport parsed = alice::parse_report_csv(csv);
  CHECK(parsed.sessions == std::vector<int>{0, 1});
  CHECK(!parsed.harmonic[0].has_value());
  CHECK(parsed.harmonic[1].has_value());
  REQUIRE(parsed.pd.has_value());

  const std::string comparison = alice::render_comparison({parsed, parsed}, {"a", "b"});
  CHECK(comparison.find("avg[a]") != std::string::npos);
  CHECK(comparison.find("harm[b]") != std::string::npos);

  alice::ParsedReport shorter = parsed;
  shorter.sessions.pop_back();
  shorter.average.pop_back();
  shorter.harmonic.pop_back();
  CHECK_THROWS_AS(alice::render_comparison({parsed, shorter}, {"a", "b"}), Error);
  try {
    alice::render_comparison({parsed, shorter}, {"a", "b"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaMismatch);
  }
}

}  // TEST_SUITE
