#include "cylbill/admissible.hpp"
#include "cylbill/rotation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cylbill;
using cylbill::testing::random_cyclic_word;
using cylbill::testing::random_reduced_word;

namespace {

const double kSqrt3 = std::sqrt(3.0);

std::vector<Edge> entrance_edges(Letter in) {
  std::vector<Edge> out;
  const int plane = in.sign > 0 ? 0 : 1;
  for (int p : other_axes(in.axis)) {
    const int q = 6 - in.axis - p;
    for (int off = 0; off <= 1; ++off) {
      Cell base = Cell::Zero();
      base[ax(in.axis)] = plane;
      base[ax(q)] = off;
      out.push_back({p, base});
    }
  }
  return out;
}

EdgePlan hand_plan(std::initializer_list<std::pair<Edge, bool>> vertices) {
  EdgePlan plan;
  for (const auto& [edge, pinned] : vertices) {
    PlanVertex v;
    v.edge = edge;
    v.pinned = pinned;
    v.kind = pinned ? VertexKind::Anchor : VertexKind::Intermediate;
    plan.vertices.push_back(v);
  }
  assign_forces(plan);
  return plan;
}

}  // namespace

TEST(CaseTable, CanonicalCasesSatisfyPrinciples) {
  for (bool alt : {false, true}) {
    for (const auto& c : canonical_cases({alt})) {
      EXPECT_TRUE(c.entry.on_cell(Cell::Zero()));
      EXPECT_EQ(c.entry.base[0], 0);
      EXPECT_NE(c.entry.axis, 1);
      ASSERT_FALSE(c.next.empty());
      EXPECT_LE(c.next.size(), 2u);
      Edge prev = c.entry;
      for (const Edge& e : c.next) {
        EXPECT_TRUE(e.on_cell(Cell::Zero()));
        EXPECT_TRUE(skew(prev, e));
        EXPECT_GT(std::abs(hull_volume(prev, e)), 0.0);
        prev = e;
      }
      const Edge& exit = c.next.back();
      if (c.straight) {
        EXPECT_EQ(exit.base[0], 1);
        EXPECT_NE(exit.axis, 1);
      } else {
        EXPECT_EQ(exit.base[1], 1);
        EXPECT_NE(exit.axis, 2);
      }
      EXPECT_TRUE(c.time_bound == 3.0 || c.time_bound == kSqrt3);
    }
  }
  const auto cases = canonical_cases();
  EXPECT_EQ(cases[0].next, (std::vector<Edge>{{1, Cell(0, 0, 1)}, {3, Cell(1, 1, 0)}}));
  EXPECT_EQ(cases[0].exit_force, 1);
  EXPECT_EQ(cases[4].next, (std::vector<Edge>{{3, Cell(1, 1, 0)}}));
  EXPECT_EQ(cases[4].exit_force, -1);
  EXPECT_EQ(canonical_cases({true})[2].next, (std::vector<Edge>{{1, Cell(0, 1, 1)}}));
}

TEST(CaseTable, EveryTurnHasExactlyOneCase) {
  int checked = 0;
  for (bool alt : {false, true}) {
    for (int i = 0; i < 6; ++i) {
      for (int o = 0; o < 6; ++o) {
        const Letter in = Letter::from_index(i), out = Letter::from_index(o);
        if (out.cancels(in)) continue;
        for (const Edge& e : entrance_edges(in)) {
          for (int f : {-1, 1}) {
            EXPECT_EQ(count_turn_matches(Cell::Zero(), in, out, {e, f}, {alt}), 1)
                << in.to_char() << out.to_char() << " edge axis " << e.axis;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_EQ(checked, 2 * 30 * 4 * 2);
  EXPECT_THROW(count_turn_matches(Cell::Zero(), kA, kA.inverse(), {{3, Cell(0, 1, 0)}, -1}), std::invalid_argument);
  EXPECT_THROW(match_turn(Cell::Zero(), kA, kA.inverse(), {{3, Cell(0, 1, 0)}, -1}), std::logic_error);
}

TEST(CaseTable, MatchIsTranslationEquivariant) {
  const Cell c(3, -2, 5);
  const EntryState s{{3, Cell(0, 1, 0) + c}, -1};
  const auto m = match_turn(c, kA, kB, s);
  EXPECT_EQ(m.pattern.id, TurnCase::ExitSideEdge);
  EXPECT_EQ(m.frame.apply(Edge{3, Cell(1, 1, 0)}), (Edge{3, Cell(1, 1, 0) + c}));
}

TEST(PlanWord, ExitSideEdgeExample) {
  PlanOptions opts;
  opts.initial_entry = EntryState{{3, Cell(0, 1, 0)}, -1};
  const EdgePlan plan = plan_word(ReducedWord::parse("ab"), opts);
  ASSERT_EQ(plan.cells.size(), 3u);
  const CellVisit& turn = plan.cells[1];
  EXPECT_EQ(turn.cell, Cell::Zero());
  ASSERT_TRUE(turn.turn_case);
  EXPECT_EQ(*turn.turn_case, TurnCase::ExitSideEdge);
  ASSERT_EQ(turn.last - turn.first, 2u);
  EXPECT_EQ(plan.vertices[turn.first].edge, (Edge{3, Cell(0, 1, 0)}));
  EXPECT_EQ(plan.vertices[turn.first].force, -1);
  EXPECT_EQ(plan.vertices[turn.first + 1].edge, (Edge{1, Cell(0, 0, 1)}));
  EXPECT_EQ(plan.vertices[turn.last].edge, (Edge{3, Cell(1, 1, 0)}));
  EXPECT_EQ(plan.vertices[turn.last].force, 1);
  EXPECT_EQ(plan.cells[2].cell, Cell(0, 1, 0));
  EXPECT_TRUE(check_plan(plan).empty());
}

TEST(PlanWord, StraightExample) {
  PlanOptions opts;
  opts.initial_entry = EntryState{{2, Cell(0, 0, 0)}, -1};
  const EdgePlan plan = plan_word(ReducedWord::parse("aa"), opts);
  const CellVisit& turn = plan.cells[1];
  ASSERT_TRUE(turn.turn_case);
  EXPECT_EQ(*turn.turn_case, TurnCase::Straight);
  ASSERT_EQ(turn.last - turn.first, 1u);
  EXPECT_EQ(plan.vertices[turn.last].edge, (Edge{3, Cell(1, 1, 0)}));
  EXPECT_EQ(plan.vertices[turn.last].force, -1);
  EXPECT_EQ(plan.cells[2].cell, Cell(1, 0, 0));
}

TEST(PlanWord, RejectsBadWords) {
  EXPECT_THROW(plan_word(ReducedWord{}), std::invalid_argument);
  EXPECT_THROW(plan_word(ReducedWord::parse("aA")), std::invalid_argument);
  EXPECT_THROW(ReducedWord::parse_reduced("aA"), std::invalid_argument);
  EXPECT_THROW(plan_periodic(ReducedWord::parse("abA")), std::invalid_argument);
}

TEST(PlanWord, RandomWordsSatisfyInvariants) {
  Rng rng(71);
  for (int rep = 0; rep < 200; ++rep) {
    const ReducedWord w = random_reduced_word(rng, 1 + rng() % 50);
    const EdgePlan plan = plan_word(w);
    const auto issues = check_plan(plan);
    EXPECT_TRUE(issues.empty()) << w.str() << ": " << (issues.empty() ? "" : issues.front());
    ASSERT_EQ(plan.cells.size(), w.size() + 1);
    for (std::size_t k = 1; k < plan.cells.size(); ++k) {
      const Cell d = plan.cells[k].cell - plan.cells[k - 1].cell;
      EXPECT_EQ(d.cwiseAbs().sum(), 1);
      EXPECT_EQ(d[ax(w[k - 1].axis)], w[k - 1].sign);
    }
    EXPECT_TRUE(plan.vertices.front().pinned);
    EXPECT_TRUE(plan.vertices.back().pinned);
  }
}

TEST(PlanWord, CheckPlanReportsCorruption) {
  EdgePlan plan = plan_word(ReducedWord::parse("abca"));
  plan.vertices[2].edge.base += Cell(5, 0, 0);
  EXPECT_FALSE(check_plan(plan).empty());
}

TEST(PlanWord, GenericForcesFollowTheCaseTable) {
  Rng rng(72);
  for (int rep = 0; rep < 100; ++rep) {
    const ReducedWord w = random_reduced_word(rng, 2 + rng() % 30);
    const EdgePlan plan = plan_word(w);
    for (std::size_t k = 1; k + 1 < plan.cells.size(); ++k) {
      const CellVisit& c = plan.cells[k];
      const PlanVertex& entry = plan.vertices[c.first];
      const CaseMatch m = match_turn(c.cell, w[k - 1], w[k], {entry.edge, entry.force});
      ASSERT_EQ(m.pattern.id, *c.turn_case);
      const Edge& exit_ref = m.pattern.next.back();
      EXPECT_EQ(plan.vertices[c.last].force, m.frame.apply_force(exit_ref, m.pattern.exit_force));
      EXPECT_EQ(plan.vertices[c.last].edge, m.frame.apply(exit_ref));
    }
  }
}

TEST(Minimize, TwoContactGridOracle) {
  // Contacts {0}x{1}x[0,1] and [0,1]x{0}x{1}, anchored at neighbouring edge midpoints.
  const EdgePlan plan = hand_plan({{{2, Cell(-1, 0, 0)}, true},
                                   {{3, Cell(0, 1, 0)}, false},
                                   {{1, Cell(0, 0, 1)}, false},
                                   {{3, Cell(1, 1, 0)}, true}});
  const auto orbit = minimize_arclength(plan, 0.0);
  const auto grid = cylbill::testing::coarse_to_fine(plan, 1e-4);
  EXPECT_NEAR(orbit.axial[1], grid.t[0], 1e-3);
  EXPECT_NEAR(orbit.axial[2], grid.t[1], 1e-3);
  EXPECT_NEAR(orbit.length, grid.length, 1e-6);
  EXPECT_LE(orbit.length, grid.length + 1e-12);
  EXPECT_LT(orbit.gradient_norm, 1e-10);
  EXPECT_LT(fermat_residual(orbit), 1e-9);
}

TEST(Minimize, RandomWindowsMatchGrid) {
  Rng rng(73);
  int done = 0;
  while (done < 12) {
    const std::size_t k = 2 + done % 2;
    const EdgePlan plan = cylbill::testing::window_plan(rng, k);
    AdmissibleOrbit orbit;
    try {
      orbit = minimize_arclength(plan, 0.0);
    } catch (const BalanceViolation&) {
      continue;
    }
    const auto grid = cylbill::testing::coarse_to_fine(plan, 1e-4);
    for (std::size_t d = 0; d < k; ++d) EXPECT_NEAR(orbit.axial[d + 1], grid.t[d], 1e-3);
    EXPECT_NEAR(orbit.length, grid.length, 1e-6);
    ++done;
  }
}

TEST(Minimize, CollinearPlanGivesStraightChord) {
  const EdgePlan plan = hand_plan({{{1, Cell(0, 0, 0)}, true}, {{3, Cell(1, 1, 0)}, false}, {{3, Cell(2, 3, 0)}, true}});
  const auto orbit = minimize_arclength(plan, 0.0);
  EXPECT_NEAR(orbit.length, std::sqrt(11.5), 1e-12);
  EXPECT_NEAR(orbit.axial[1], 1.0 / 6.0, 1e-9);
}

TEST(Minimize, ContactLeavingItsEdgeIsABalanceViolation) {
  const EdgePlan plan = hand_plan({{{1, Cell(0, 0, 0)}, true}, {{3, Cell(1, 1, 0)}, false}, {{1, Cell(1, 2, -1)}, true}});
  try {
    minimize_arclength(plan, 0.0);
    FAIL() << "expected a balance violation";
  } catch (const BalanceViolation& e) {
    ASSERT_TRUE(e.index());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(Minimize, IterationBudgetIsEnforced) {
  MinimizeOptions opts;
  opts.max_iterations = 1;
  EXPECT_THROW(minimize_arclength(plan_word(ReducedWord::parse("abcabcACBacb")), 0.02, opts), NonConvergence);
}

TEST(Minimize, LongWordsRespectCellTimeBounds) {
  Rng rng(74);
  for (int rep = 0; rep < 20; ++rep) {
    const ReducedWord w = random_reduced_word(rng, 50);
    const auto orbit = minimize_arclength(plan_word(w), 0.0);
    ASSERT_EQ(orbit.cell_times.size(), orbit.plan.cells.size());
    for (std::size_t k = 0; k < orbit.cell_times.size(); ++k) {
      EXPECT_LE(orbit.cell_times[k], 3.0);
      const auto c = orbit.plan.cells[k].turn_case;
      if (c == TurnCase::FarSideEdge || c == TurnCase::CrossEdgePulledBack || c == TurnCase::Straight)
        EXPECT_LE(orbit.cell_times[k], kSqrt3 + 1e-12);
    }
    EXPECT_GT(orbit.interior_margin, 0.0);
    EXPECT_GE(orbit.speed(), 1.0 / 3.0 - 0.05);
    for (std::size_t i = 1; i < orbit.objective_history.size(); ++i)
      EXPECT_LE(orbit.objective_history[i], orbit.objective_history[i - 1] * (1 + 1e-14));
    EXPECT_LT(orbit.gradient_norm, 1e-10);
    EXPECT_LT(fermat_residual(orbit), 1e-8);
  }
}

TEST(Minimize, SwollenOrbitsObeyTheSpecularLaw) {
  Rng rng(75);
  for (int rep = 0; rep < 10; ++rep) {
    const auto orbit = minimize_arclength(plan_word(random_reduced_word(rng, 20)), 0.05);
    EXPECT_LT(specular_residual(orbit), 1e-8);
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
      EXPECT_NEAR(orbit.plan.vertices[i].edge.line().distance(orbit.points[i]), 0.05, 1e-12);
    for (std::size_t i = 1; i < orbit.objective_history.size(); ++i)
      EXPECT_LE(orbit.objective_history[i], orbit.objective_history[i - 1] * (1 + 1e-14));
  }
}

TEST(Validate, WordAbAtModerateRadius) {
  const auto orbit = minimize_arclength(plan_word(ReducedWord::parse("ab")), 0.05);
  const auto rec = validate_orbit(orbit);
  EXPECT_EQ(word_of(rec).str(), "ab");
  EXPECT_EQ(static_cast<std::size_t>(rec.collisions), orbit.points.size() - 1);
}

TEST(Validate, SingleContactReflection) {
  const auto orbit = minimize_arclength(plan_word(ReducedWord::parse("a")), 0.05);
  ASSERT_EQ(orbit.points.size(), 3u);
  EXPECT_LT(specular_residual(orbit), 1e-8);
  const auto rec = validate_orbit(orbit);
  const OrbitEvent* hit = nullptr;
  for (const auto& e : rec.events)
    if (e.kind == EventKind::Collision) {
      hit = &e;
      break;
    }
  ASSERT_NE(hit, nullptr);
  const Vec3 planned = (orbit.points[2] - orbit.points[1]).normalized();
  EXPECT_NEAR((hit->v - planned).norm(), 0.0, 1e-8);
  const Vec3 n = cylinder_normal(hit->q, {hit->cylinder, 0.05});
  EXPECT_NEAR(std::abs(hit->v_in.dot(n)), std::abs(hit->v.dot(n)), 1e-12);
}

TEST(Validate, FiftyLetterWords) {
  Rng rng(76);
  for (int rep = 0; rep < 5; ++rep) {
    const ReducedWord w = random_reduced_word(rng, 50);
    const auto orbit = minimize_arclength(plan_word(w), 0.02);
    const auto rec = validate_orbit(orbit);
    EXPECT_EQ(word_of(rec), w);
  }
}

TEST(Validate, RejectsWrongInputs) {
  const auto flat = minimize_arclength(plan_word(ReducedWord::parse("ab")), 0.0);
  EXPECT_THROW(validate_orbit(flat), std::invalid_argument);
  const auto periodic = close_periodic(ReducedWord::parse("ab"), 0.05);
  EXPECT_THROW(validate_orbit(periodic), std::invalid_argument);
}

TEST(IdleRuns, SplicedCyclesCancel) {
  const EdgePlan plan = plan_word(ReducedWord::parse("abc"));
  const std::size_t after = plan.cells[1].first;
  const EdgePlan spliced = splice_idle_cycles(plan, after, 2);
  EXPECT_EQ(spliced.vertices.size(), plan.vertices.size() + 6);
  EXPECT_EQ(spliced.word, plan.word);
  EXPECT_TRUE(check_plan(spliced).empty());
  std::size_t idle = 0;
  for (const auto& v : spliced.vertices) idle += v.idle;
  EXPECT_EQ(idle, 6u);
}

TEST(IdleRuns, TargetOneThird) {
  Rng rng(77);
  const ReducedWord w = random_reduced_word(rng, 20);
  const auto orbit = minimize_arclength(plan_word(w), 0.02);
  ASSERT_GT(orbit.speed(), 1.0 / 3.0);
  const auto slow = insert_idle_runs(orbit, 1.0 / 3.0);
  EXPECT_GE(slow.speed(), 0.3267);
  EXPECT_LE(slow.speed(), 0.3400);
  EXPECT_EQ(slow.plan.word, w);
  EXPECT_EQ(word_of(validate_orbit(slow)), w);
}

TEST(IdleRuns, LowTargetsAndEdgeCases) {
  Rng rng(79);
  const ReducedWord w = random_reduced_word(rng, 20);
  const auto orbit = minimize_arclength(plan_word(w), 0.02);
  for (double target : {0.05, 0.15, 0.3}) {
    const auto slow = construct_at_speed(w, 0.02, target);
    EXPECT_NEAR(slow.orbit.speed(), target, 0.02 * target);
    EXPECT_NEAR(static_cast<double>(w.size()) / slow.record.duration(), target, 0.02 * target);
    EXPECT_EQ(word_of(slow.record), w);
    EXPECT_TRUE(slow.orbit.validated);
  }
  const auto same = insert_idle_runs(orbit, orbit.speed());
  EXPECT_EQ(same.points.size(), orbit.points.size());
  EXPECT_EQ(same.length, orbit.length);
  EXPECT_THROW(insert_idle_runs(orbit, 0.0), std::invalid_argument);
  EXPECT_THROW(insert_idle_runs(orbit, orbit.speed() * 1.5), std::invalid_argument);
}

TEST(IdleRuns, ShortWordsReachEveryTargetFraction) {
  const std::vector<std::pair<const char*, std::vector<double>>> cases = {
      {"a", {0.61, 0.47, 0.3, 0.12}},
      {"ab", {0.8, 0.61, 0.47, 0.3, 0.12}},
      {"abCab", {0.95, 0.8, 0.61, 0.47, 0.3, 0.12}},
      {"abcbaCB", {0.95, 0.8, 0.61, 0.47, 0.3, 0.12}},
  };
  for (const auto& [text, fracs] : cases) {
    const ReducedWord w = ReducedWord::parse(text);
    const double top = minimize_arclength(plan_word(w), 0.05).speed();
    for (double frac : fracs) {
      const double target = frac * top;
      const auto slow = construct_at_speed(w, 0.05, target);
      EXPECT_NEAR(static_cast<double>(w.size()) / slow.record.duration(), target, 0.02 * target) << text;
      EXPECT_NEAR(slow.record.duration(), slow.orbit.duration(), 1e-6) << text;
      EXPECT_EQ(word_of(slow.record), w) << text;
      EXPECT_GE(slow.orbit.lead_trim, 0.0);
      EXPECT_GE(slow.orbit.tail_trim, 0.0);
    }
  }
  // One idle cycle outweighs the whole orbit of a single letter.
  const ReducedWord a = ReducedWord::parse("a");
  const double top = minimize_arclength(plan_word(a), 0.05).speed();
  EXPECT_THROW(construct_at_speed(a, 0.05, 0.95 * top), ConstructionError);
}

TEST(IdleRuns, EntryVariantsRealiseTheSameWord) {
  const ReducedWord w = ReducedWord::parse("abcbaCB");
  const auto variants = entry_variants(w);
  EXPECT_EQ(variants.size(), 8u);
  EXPECT_FALSE(variants.front().initial_entry);
  for (const auto& po : variants) {
    const EdgePlan plan = plan_word(w, po);
    EXPECT_EQ(plan.word, w);
    EXPECT_TRUE(check_plan(plan).empty());
  }
}

TEST(Periodic, SingleLetterShift) {
  const auto orbit = close_periodic(ReducedWord::parse("a"), 0.05);
  const Cell s = orbit.plan.period_shift;
  EXPECT_GE(s[0], 1);
  EXPECT_EQ(s[1], 0);
  EXPECT_EQ(s[2], 0);
  EXPECT_EQ(orbit.plan.word.size(), static_cast<std::size_t>(s[0]));
  const auto val = validate_periodic(orbit, 3);
  EXPECT_LT(val.max_position_error, 1e-6);
  EXPECT_LT(val.max_velocity_error, 1e-6);
}

TEST(Periodic, WordAbRepeats) {
  const auto orbit = close_periodic(ReducedWord::parse("ab"), 0.05);
  const auto val = validate_periodic(orbit, 3);
  EXPECT_LT(val.max_position_error, 1e-6);
  EXPECT_LT(val.max_velocity_error, 1e-6);
  const ReducedWord& p = orbit.plan.word;
  ASSERT_EQ(p.size() % 2, 0u);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i % 2 ? kB : kA);
  const auto sample = rotation_vector(val.record, 16);
  ASSERT_GE(sample.vector.direction.word.size(), 2u);
  for (std::size_t i = 0; i < sample.vector.direction.word.size(); ++i)
    EXPECT_EQ(sample.vector.direction.word[i], i % 2 ? kB : kA);
}

TEST(Periodic, SpeedMatchesLongFiniteOrbit) {
  Rng rng(78);
  for (int rep = 0; rep < 5; ++rep) {
    const ReducedWord w = random_cyclic_word(rng, 2 + rng() % 6);
    const auto per = close_periodic(w, 0.0);
    // Finite orbit following the same states: start where the periodic plan
    // enters its second compartment, which is entered through w_1.
    const CellVisit& second = per.plan.cells[1];
    const PlanVertex& v = per.plan.vertices[second.first];
    PlanOptions opts;
    opts.initial_entry = EntryState{{v.edge.axis, v.edge.base - second.cell}, v.force};
    std::vector<Letter> letters;
    while (letters.size() < 200) letters.insert(letters.end(), w.begin(), w.end());
    const auto finite = minimize_arclength(plan_word(reduce(letters), opts), 0.0);
    EXPECT_NEAR(finite.speed(), per.speed(), 0.02) << w.str();
  }
}
