// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <set>

#include "leomimo/pilots.hpp"
#include "leomimo/rng.hpp"

using namespace leomimo;

TEST_CASE("pilot book: degenerate single sequence") {
  PilotBook book(1);
  CHECK(book.sequences().n_rows == 1);
  CHECK(std::abs(book.sequence(0)[0] - std::complex<double>{1.0, 0.0}) <
        1e-15);
}

TEST_CASE("pilot book: Gram matrix is tau_p times identity") {
  PilotBook book(30);
  const arma::cx_mat gram = book.sequences().t() * book.sequences();
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const std::complex<double> expected{i == j ? 30.0 : 0.0, 0.0};
      CHECK(std::abs(gram(i, j) - expected) < 1e-11);
    }
}

TEST_CASE("pilot book: every sequence has squared norm tau_p") {
  for (int tau_p : {1, 2, 7, 30, 64}) {
    PilotBook book(tau_p);
    for (int k = 0; k < tau_p; ++k) {
      const arma::cx_vec seq = book.sequence(k);
      CHECK(arma::dot(arma::conj(seq), seq).real() ==
            doctest::Approx(static_cast<double>(tau_p)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(PilotBook(0), std::invalid_argument);
}

TEST_CASE("assignment: ten users share one reference satellite freely") {
  PilotBook book(30);
  std::set<int> indices;
  for (int user = 0; user < 10; ++user) {
    const auto pilot = book.assign(user, /*sat=*/5);
    REQUIRE(pilot.has_value());
    indices.insert(*pilot);
  }
  CHECK(indices.size() == 10);  // all distinct
}

TEST_CASE("assignment: exhausted satellite denies, fresh book starts at zero") {
  PilotBook book(1);
  const auto first = book.assign(0, 3);
  REQUIRE(first.has_value());
  CHECK(*first == 0);
  const auto second = book.assign(1, 3);
  CHECK(!second.has_value());

  PilotBook fresh(8);
  CHECK(*fresh.assign(42, 0) == 0);
}

TEST_CASE("occupancy: double booking is rejected, release frees the slot") {
  PilotBook book(4);
  book.occupy(2, 1, 10);
  CHECK(!book.is_free(2, 1));
  CHECK(book.occupant(2, 1) == 10);
  CHECK_THROWS_AS(book.occupy(2, 1, 11), std::logic_error);
  CHECK(!book.try_occupy(2, 1, 11));
  book.release(2, 1, 11);  // wrong user: no effect
  CHECK(!book.is_free(2, 1));
  book.release(2, 1, 10);
  CHECK(book.is_free(2, 1));
  CHECK(book.try_occupy(2, 1, 11));
}

TEST_CASE("co-pilot sets: orthogonal users, shared pilots, exhaustive scan") {
  SUBCASE("all orthogonal") {
    PilotBook book(16);
    for (int u = 0; u < 8; ++u) book.assign(u, 0);
    for (int u = 0; u < 8; ++u)
      CHECK(book.co_pilot_set(u) == std::vector<int>{u});
  }

  SUBCASE("users 1 and 7 share pilot 3") {
    PilotBook book(8);
    book.set_assignment(1, 3);
    book.set_assignment(7, 3);
    book.set_assignment(2, 0);
    CHECK(book.co_pilot_set(1) == std::vector<int>{1, 7});
    CHECK(book.co_pilot_set(7) == std::vector<int>{1, 7});
    CHECK(book.co_pilot_set(2) == std::vector<int>{2});
  }

  SUBCASE("random assignment matches an exhaustive scan") {
    PilotBook book(30);
    Rng rng(17);
    std::map<int, int> truth;
    for (int u = 0; u < 40; ++u) {
      const int p = static_cast<int>(rng.next_u64() % 30);
      book.set_assignment(u, p);
      truth[u] = p;
    }
    for (int u = 0; u < 40; ++u) {
      std::vector<int> expected;
      for (const auto& [user, pilot] : truth)
        if (pilot == truth[u]) expected.push_back(user);
      CHECK(book.co_pilot_set(u) == expected);
    }
  }

  SUBCASE("unassigned user is an error") {
    PilotBook book(4);
    CHECK_THROWS_AS(book.co_pilot_set(9), std::invalid_argument);
  }
}

TEST_CASE("co-pilot sets partition the assigned users") {
  PilotBook book(5);
  Rng rng(99);
  const int users = 23;
  for (int u = 0; u < users; ++u)
    book.set_assignment(u, static_cast<int>(rng.next_u64() % 5));

  std::set<int> seen;
  for (int u = 0; u < users; ++u) {
    if (seen.contains(u)) continue;
    const auto group = book.co_pilot_set(u);
    for (int member : group) {
      CHECK(!seen.contains(member));
      seen.insert(member);
      // every member reports the identical group
      CHECK(book.co_pilot_set(member) == group);
    }
  }
  CHECK(seen.size() == users);
}

TEST_CASE("cross-pilot despreading is orthogonal to working precision") {
  PilotBook book(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      if (i == j) continue;
      const std::complex<double> ip =
          arma::dot(arma::conj(book.sequence(i)), book.sequence(j));
      CHECK(std::abs(ip) < 1e-12 * 30);
    }
  }
}
