#include <gtest/gtest.h>

#include <map>
#include <set>

#include "kcd/lattice.hpp"

using namespace kcd;

namespace {

ValidationErrorKind kind_of(const std::string& text, Boundary b = Boundary::toroidal) {
  try {
    validate(load_cluster(text), b);
  } catch (const ValidationError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no validation error for:\n" << text;
  return ValidationErrorKind::too_many_sites;
}

bool adjacent(const HoneycombCluster& c, int a, int b) {
  for (const auto& l : c.links())
    if ((l.i == a && l.j == b) || (l.i == b && l.j == a)) return true;
  return false;
}

}  // namespace

TEST(LoadCluster, MinimalTwoSiteText) {
  const auto spec = load_cluster("sites 2\nlink 1 2 z\n");
  EXPECT_EQ(spec.n_sites, 2);
  ASSERT_EQ(spec.links.size(), 1u);
  EXPECT_EQ(spec.links[0], (Link{0, 1, LinkType::z}));
}

TEST(LoadCluster, CommentsAndBlankLines) {
  const auto spec = load_cluster("# header\n\nsites 2   # two\n  link 1 2 x # bond\n");
  EXPECT_EQ(spec.links.at(0).type, LinkType::x);
}

TEST(LoadCluster, DuplicateLinkParsesButFailsValidation) {
  const std::string text = "sites 2\nlink 1 2 z\nlink 2 1 z\n";
  EXPECT_NO_THROW(load_cluster(text));
  EXPECT_EQ(kind_of(text, Boundary::open), ValidationErrorKind::duplicate_link);
}

TEST(LoadCluster, SyntaxErrorsReportLine) {
  try {
    load_cluster("sites 2\nlink 1 two z\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(load_cluster("sites 2\nlink 1 2 w\n"), ParseError);
  EXPECT_THROW(load_cluster("sites 2\nbond 1 2 z\n"), ParseError);
  EXPECT_THROW(load_cluster("link 1 2 z\n"), ParseError);
  EXPECT_THROW(load_cluster("sites 2\nplaq 1:z 2:x\n"), ParseError);
}

TEST(Validate, LinkTypeMultiplicity) {
  EXPECT_EQ(kind_of("sites 3\nlink 1 2 x\nlink 1 3 x\n", Boundary::open), ValidationErrorKind::link_type_multiplicity);
}

TEST(Validate, MissingLinkTypeOnTorus) {
  EXPECT_EQ(kind_of("sites 2\nlink 1 2 z\n"), ValidationErrorKind::missing_link_type);
}

TEST(Validate, RangeAndSelfLinks) {
  EXPECT_EQ(kind_of("sites 2\nlink 1 3 z\n", Boundary::open), ValidationErrorKind::site_out_of_range);
  EXPECT_EQ(kind_of("sites 2\nlink 1 1 z\n", Boundary::open), ValidationErrorKind::self_link);
}

TEST(Validate, OverlappingPartitions) {
  const std::string text = save_cluster(builtin_cluster("honeycomb8").spec()) + "part D 1\n";
  EXPECT_EQ(kind_of(text), ValidationErrorKind::overlapping_partitions);
}

TEST(Validate, PlaquetteMustClose) {
  auto spec = builtin_cluster("honeycomb8").spec();
  std::swap(spec.plaquettes[0].sites[1], spec.plaquettes[0].sites[2]);
  EXPECT_EQ(kind_of(save_cluster(spec)), ValidationErrorKind::plaquette_not_closed);
}

TEST(Validate, PlaquetteLabelsAreOutwardLinks) {
  auto spec = builtin_cluster("honeycomb8").spec();
  spec.plaquettes[0].sites[0].label = LinkType::y;
  EXPECT_EQ(kind_of(save_cluster(spec)), ValidationErrorKind::plaquette_label_mismatch);
}

TEST(Validate, EightSiteTorusByHand) {
  // 2x2 cells, A(i,j) = 2(i + 2j) + 1, B = A + 1; z inside a cell, x to the
  // cell at -a1, y to the cell at -a2.
  std::set<std::tuple<int, int, char>> expected = {
      {1, 2, 'z'}, {3, 4, 'z'}, {5, 6, 'z'}, {7, 8, 'z'}, {1, 4, 'x'}, {3, 2, 'x'},
      {5, 8, 'x'}, {7, 6, 'x'}, {1, 6, 'y'}, {3, 8, 'y'}, {5, 2, 'y'}, {7, 4, 'y'}};
  const auto c = builtin_cluster("honeycomb8");
  std::set<std::tuple<int, int, char>> got;
  for (const auto& l : c.links()) got.insert({l.i + 1, l.j + 1, to_char(l.type)});
  EXPECT_EQ(got, expected);
  EXPECT_EQ(c.plaquettes().size(), 4u);
}

TEST(Validate, EveryBuiltinHasOneLinkOfEachType) {
  for (const auto& name : builtin_cluster_names()) {
    const auto c = builtin_cluster(name);
    EXPECT_EQ(c.n_sites() % 2, 0) << name;
    EXPECT_EQ(static_cast<int>(c.links().size()), 3 * c.n_sites() / 2) << name;
    for (int s = 0; s < c.n_sites(); ++s)
      for (auto t : {LinkType::x, LinkType::y, LinkType::z}) {
        const auto nb = c.neighbour(s, t);
        ASSERT_TRUE(nb.has_value()) << name << " site " << s;
        EXPECT_EQ(c.neighbour(*nb, t), s);
      }
    for (auto t : {LinkType::x, LinkType::y, LinkType::z})
      EXPECT_EQ(static_cast<int>(c.links(t).size()), c.n_sites() / 2) << name;
  }
}

TEST(Validate, OpenBoundaryAllowsFragments) {
  const auto c = validate(load_cluster("sites 2\nlink 1 2 z\n"), Boundary::open);
  EXPECT_EQ(c.neighbour(0, LinkType::z), 1);
  EXPECT_FALSE(c.neighbour(0, LinkType::x).has_value());
}

TEST(StandardCluster, MatchesReferenceData) {
  const auto c = standard_cluster_24();
  EXPECT_EQ(c.n_sites(), 24);
  EXPECT_EQ(c.links().size(), 36u);
  EXPECT_EQ(c.find_partition("A")->sites, (std::vector<int>{0, 1, 4, 5}));
  EXPECT_EQ(c.find_partition("B")->sites, (std::vector<int>{16, 17, 19, 20}));
  EXPECT_EQ(c.find_partition("C")->sites, (std::vector<int>{9, 12, 13, 18, 21}));

  const auto& p = c.reference_plaquette();
  const int sites[6] = {1, 4, 9, 13, 10, 5};
  const char labels[6] = {'z', 'x', 'y', 'z', 'x', 'y'};
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(p.sites[static_cast<std::size_t>(k)].site + 1, sites[k]);
    EXPECT_EQ(to_char(p.sites[static_cast<std::size_t>(k)].label), labels[k]);
    EXPECT_TRUE(adjacent(c, sites[k] - 1, sites[(k + 1) % 6] - 1));
  }
}

TEST(StandardCluster, PlaquettesTileTheTorus) {
  // 12 hexagons, each site on exactly 3 of them.
  const auto c = standard_cluster_24();
  ASSERT_EQ(c.plaquettes().size(), 12u);
  std::map<int, int> count;
  for (const auto& p : c.plaquettes())
    for (const auto& s : p.sites) ++count[s.site];
  for (int s = 0; s < 24; ++s) EXPECT_EQ(count[s], 3) << s;
}

TEST(SaveCluster, RoundTripIsLossless) {
  for (const auto& name : builtin_cluster_names()) {
    const auto spec = builtin_cluster(name).spec();
    EXPECT_EQ(load_cluster(save_cluster(spec)), spec) << name;
  }
}

TEST(ResolveCluster, BuiltinPrefixAndPath) {
  EXPECT_EQ(resolve_cluster("builtin:honeycomb12").n_sites(), 12);
  EXPECT_EQ(resolve_cluster("honeycomb18").n_sites(), 18);
  const auto c = resolve_cluster(std::string(KCD_DATA_DIR) + "/clusters/kitaev4.cluster");
  EXPECT_EQ(c.n_sites(), 4);
  EXPECT_EQ(c.name(), "kitaev4");
  EXPECT_THROW(resolve_cluster("builtin:nonesuch"), std::invalid_argument);
}
