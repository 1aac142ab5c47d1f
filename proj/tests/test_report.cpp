#include <doctest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "slicemine/report.hpp"

using namespace slicemine;
using report::Format;

namespace {

report::RunReport one_slice_report() {
  report::RunReport r;
  r.N = 16281;
  r.K = 13759;
  r.metric = 0.845;
  r.ci_low = 0.839;
  r.ci_high = 0.851;
  report::PredicateReport p;
  p.feature = "relationship";
  p.values = {"5"};
  p.text = "5";
  report::SliceReport s;
  s.predicates = {p};
  s.n = 692;
  s.k = 484;
  s.performance = 0.699;
  s.p_value = 1.2e-25;
  s.heuristic = "categorical";
  s.order = 1;
  r.slices = {s};
  r.groups = {{"categorical", 1, 40, 1, report::summarize_supports(std::vector<Index>{692})}};
  return r;
}

SliceRun planted_run(const Dataset& d) {
  SlicerConfig c;
  c.max_order = 2;
  return run_slicer(d, c);
}

}  // namespace

TEST_CASE("support summaries") {
  const auto two = report::summarize_supports(std::vector<Index>{3, 80});
  CHECK(two.count == 2);
  CHECK(*two.min == 3.0);
  CHECK(*two.avg == 41.5);
  CHECK(*two.max == 80.0);
  CHECK(*two.std == 38.5);

  const auto one = report::summarize_supports(std::vector<Index>{17});
  CHECK(*one.std == 0.0);
  CHECK(*one.avg == 17.0);

  const auto none = report::summarize_supports(std::vector<Index>{});
  CHECK(none.count == 0);
  CHECK_FALSE(none.min);
  CHECK_FALSE(none.avg);
  CHECK_FALSE(none.max);
  CHECK_FALSE(none.std);
}

TEST_CASE("number formatting") {
  CHECK(report::format_pvalue(1.2e-25) == "1.2E-25");
  CHECK(report::format_pvalue(0.0123) == "1.2E-02");
  CHECK(report::format_pvalue(0.0) == "0.0E+00");
  CHECK(report::format_performance(0.6994) == "0.699");
  CHECK(report::format_performance(1.0) == "1.000");
}

TEST_CASE("markdown slice rows: attribute, value, support, performance, p-value") {
  const auto md = report::render_markdown(one_slice_report());
  CHECK(md.find("| relationship | 5 | 692 | 0.699 | 1.2E-25 |") != std::string::npos);
  CHECK(md.find("| categorical | 1 | 40 | 1 |") != std::string::npos);
  CHECK(md.find("MIN | AVG | MAX | STD") != std::string::npos);
}

TEST_CASE("csv output") {
  const auto csv = report::render_csv(one_slice_report());
  std::istringstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "features,predicate,heuristic,order,support,correct,performance,p_value");
  CHECK(row.rfind("relationship,5,categorical,1,692,484,0.699,", 0) == 0);
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("parse_format") {
  CHECK(report::parse_format("json") == Format::Json);
  CHECK(report::parse_format("markdown") == Format::Markdown);
  CHECK(report::parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(report::parse_format("xml"), ConfigError);
}

TEST_CASE("an empty run still renders every section") {
  std::ostringstream csv;
  csv << "x,label,pred\n";
  for (int i = 0; i < 50; ++i) csv << i << ",1,1\n";
  const Dataset d = fixtures::load_csv(csv.str());
  const auto run = planted_run(d);
  const auto rep = report::make_report(d, run, {});
  const auto doc = nlohmann::json::parse(report::render_json(rep));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["slices"].empty());
  CHECK(doc["dataset"]["records"] == 50);
  REQUIRE(doc["groups"].size() == 6);
  for (const auto& g : doc["groups"]) {
    CHECK(g["reported"] == 0);
    CHECK(g["support"]["count"] == 0);
    CHECK(g["support"]["min"].is_null());
  }
  CHECK_NOTHROW(report::render_markdown(rep));
  CHECK(report::render_csv(rep) == "features,predicate,heuristic,order,support,correct,performance,p_value\n");
}

TEST_CASE("json round trip is byte-identical") {
  const auto planted = fixtures::planted_dataset(2, 1500);
  const Dataset d = fixtures::load_csv(planted.csv);
  report::ReportSettings settings;
  settings.input = "planted.csv";
  settings.ground_truth = "label";
  settings.prediction = "pred";
  settings.heuristics = {"categorical", "hpd", "dt"};
  const auto rep = report::make_report(d, planted_run(d), settings);
  REQUIRE_FALSE(rep.slices.empty());
  const auto text = report::render_json(rep);
  const auto parsed = report::parse_json(text);
  CHECK(report::render_json(parsed) == text);
  CHECK(report::render_markdown(parsed) == report::render_markdown(rep));
  CHECK(report::render_csv(parsed) == report::render_csv(rep));
  CHECK_THROWS(report::parse_json("{\"schema_version\": 99}"));
  CHECK_THROWS(report::parse_json("not json"));
}

TEST_CASE("group statistics match the reported slices") {
  const auto planted = fixtures::planted_dataset(6, 1500);
  const Dataset d = fixtures::load_csv(planted.csv);
  const auto run = planted_run(d);
  const auto rep = report::make_report(d, run, {});
  CHECK(rep.N == 1500);
  CHECK(rep.settings.min_support == run.filters.min_support);
  CHECK(rep.slices.size() == run.reported.size());
  for (const auto& g : rep.groups) {
    std::vector<Index> sizes;
    for (const auto& s : rep.slices) {
      if (s.heuristic == g.heuristic && s.order == g.order) sizes.push_back(s.n);
    }
    CHECK(g.reported == static_cast<Index>(sizes.size()));
    CHECK(g.supports.count == g.reported);
    if (!sizes.empty()) CHECK(*g.supports.max == static_cast<double>(*std::max_element(sizes.begin(), sizes.end())));
  }
}

TEST_CASE("rendered predicates parse back to the same membership") {
  const auto planted = fixtures::planted_dataset(8, 1200);
  const Dataset d = fixtures::load_csv(planted.csv);
  const auto run = planted_run(d);
  REQUIRE_FALSE(run.reported.empty());
  for (const auto& e : run.reported) {
    Slice rebuilt;
    rebuilt.heuristic = e.slice.heuristic;
    for (const auto& t : e.slice.terms) {
      const auto& col = d.feature(t.feature);
      const auto text = report::render_predicate(col, t.predicate);
      rebuilt.terms.push_back({t.feature, report::parse_predicate(col, text)});
    }
    CHECK((membership(d, rebuilt) == membership(d, e.slice)).all());
  }
}

TEST_CASE("predicate text") {
  const Dataset d = fixtures::load_csv("grade,age,label,pred\nB,30,1,1\nA,40.5,1,0\nC,50,0,0\nB,61,1,1\n",
                                       {.ground_truth = "label", .prediction = "pred", .all_numeric = true});
  const auto& grade = d.feature(0);
  const auto& age = d.feature(1);
  CHECK(report::render_predicate(grade, make_values({*grade.value_of("B")})) == "B");
  CHECK(report::render_predicate(grade, make_values({0, 2})) == "(A, C)");
  CHECK(report::render_predicate(age, make_interval(33, 64)) == "33 - 64");
  FeaturePredicate two = IntervalUnion{{{1, 2.5}, {7, 9}}};
  CHECK(report::render_predicate(age, two) == "1 - 2.5 | 7 - 9");
  CHECK(report::parse_predicate(age, "1 - 2.5 | 7 - 9") == two);
  CHECK(report::parse_predicate(grade, "(A, C)") == make_values({0, 2}));
  CHECK_THROWS(report::parse_predicate(grade, "Z"));
}
