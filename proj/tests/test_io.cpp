#include <edclust/datagen.hpp>
#include <edclust/io.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace edclust;

namespace {

Dataset parse(const std::string& text)
{
    std::istringstream is(text);
    return parse_dataset(is);
}

std::string serialize(const Dataset& d)
{
    std::ostringstream os;
    write_dataset(os, d);
    return os.str();
}

std::size_t error_line(const std::string& text)
{
    try {
        parse(text);
    } catch (const data_error& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(ReadDataset, RowsInOrder)
{
    const auto d = parse("#alphabet: GET,POST,404\nid,label,seq\na,0,GET;404\nb,,POST\nc,1,GET;GET;POST\n");
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.ids, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(d.sequences[0], Seq::from_ids({0, 2}));
    EXPECT_EQ(d.sequences[2], Seq::from_ids({0, 0, 1}));
    EXPECT_EQ(d.labels[0], 0u);
    EXPECT_FALSE(d.labels[1].has_value());
    EXPECT_FALSE(d.fully_labeled());
    EXPECT_THROW(d.label_vector(), data_error);
}

TEST(ReadDataset, ErrorsNameTheLine)
{
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0,a;b\ny,1,a;c\n"), 4u);
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0,\n"), 3u);
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0,a\nz,zero,a\n"), 4u);
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0\n"), 3u);
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0,a\nx,1,b\n"), 4u);
    EXPECT_EQ(error_line("#alphabet: a,b\nid,label,seq\nx,0,a;;b\n"), 3u);
    EXPECT_EQ(error_line("id,label,seq\n"), 1u);
    EXPECT_EQ(error_line("#alphabet: a,a\n"), 1u);
    EXPECT_EQ(error_line("#alphabet: a\nid,seq\n"), 2u);
}

TEST(ReadDataset, ToleratesCrlfAndBlankLines)
{
    const auto d = parse("#alphabet: a,b\r\nid,label,seq\r\n\r\nx,1,a;b\r\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.sequences[0], Seq::from_ids({0, 1}));
}

TEST(WriteDataset, RoundTripIsIdentity)
{
    GenSpec spec;
    spec.m = 50;
    spec.overlap_fraction = 0.1;
    const auto d = to_dataset(generate(spec));
    const auto text = serialize(d);
    const auto back = parse(text);
    EXPECT_EQ(serialize(back), text);
    EXPECT_EQ(back.sequences, d.sequences);
    EXPECT_EQ(back.labels, d.labels);
    EXPECT_EQ(back.alphabet, d.alphabet);
}

TEST(WriteDataset, ExactLayout)
{
    const std::string text = "#alphabet: x,y\nid,label,seq\nr1,,x;y\nr2,3,y\n";
    EXPECT_EQ(serialize(parse(text)), text);
}

TEST(CostMatrix, ReadsByTokenName)
{
    const Alphabet ab({"a", "b", "c"});
    std::istringstream is(",c,a,b\nb,2,1,0\na,2,0,1\nc,0,3,3\n");
    const auto m = parse_cost_matrix(is, ab, 0.5);
    EXPECT_EQ(m.substitution(ab.intern("a"), ab.intern("b")), 1.0);
    EXPECT_EQ(m.substitution(ab.intern("c"), ab.intern("a")), 3.0);
    EXPECT_EQ(m.substitution(ab.intern("b"), ab.intern("c")), 2.0);
    EXPECT_EQ(m.deletion(), 0.5);
}

TEST(CostMatrix, Rejections)
{
    const Alphabet ab({"a", "b"});
    auto parse_m = [&](const std::string& text) {
        std::istringstream is(text);
        return parse_cost_matrix(is, ab, 1.0);
    };
    EXPECT_THROW(parse_m(",a,b\na,1,1\nb,1,0\n"), config_error);
    EXPECT_THROW(parse_m(",a,b\na,0,x\nb,1,0\n"), data_error);
    EXPECT_THROW(parse_m(",a,z\na,0,1\nb,1,0\n"), data_error);
    EXPECT_THROW(parse_m(",a,b\na,0,1\n"), data_error);
    EXPECT_THROW(parse_m(",a,b\na,0,1\na,0,1\n"), data_error);
}

TEST(Assignment, RoundTrip)
{
    std::ostringstream os;
    const std::vector<std::size_t> a{1, 0, 2};
    write_assignment(os, {"p", "q", "r"}, a);
    EXPECT_EQ(os.str(), "id,cluster\np,1\nq,0\nr,2\n");
    std::istringstream is(os.str());
    const auto rows = parse_assignment(is);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2].first, "r");
    EXPECT_EQ(rows[2].second, 2u);
}

TEST(Centroids, TokenSyntax)
{
    const Alphabet ab({"lo", "hi"});
    std::ostringstream os;
    write_centroids(os, {Seq::from_ids({0, 1, 1}), Seq::from_ids({1})}, ab);
    EXPECT_EQ(os.str(), "lo;hi;hi\nhi\n");
}

TEST(JsonConfig, GenSpec)
{
    const auto s = gen_spec_from_json(nlohmann::json::parse(
        R"({"m": 50, "k_true": 3, "overlap_fraction": 0.2, "separation": 4, "rng_seed": 9})"));
    EXPECT_EQ(s.m, 50u);
    EXPECT_EQ(s.k_true, 3u);
    EXPECT_EQ(s.overlap_fraction, 0.2);
    EXPECT_EQ(s.effective_separation(), 4.0);
    EXPECT_EQ(s.rng_seed, 9u);
    EXPECT_THROW(gen_spec_from_json(nlohmann::json::parse(R"({"mm": 5})")), config_error);
    EXPECT_THROW(gen_spec_from_json(nlohmann::json::parse(R"({"m": "many"})")), config_error);
}

TEST(JsonConfig, Experiment)
{
    const auto cfg = experiment_from_json(nlohmann::json::parse(
        R"({"specs": [{"m": 40}, {"m": 40, "overlap_fraction": 0.1}],
            "cluster": {"restarts": 2, "tie_policy": "empty", "seed": 3},
            "bins": [0, 2, 10]})"));
    EXPECT_EQ(cfg.specs.size(), 2u);
    EXPECT_TRUE(cfg.k_from_spec);
    EXPECT_EQ(cfg.cluster.restarts, 2u);
    EXPECT_EQ(cfg.cluster.tie_policy, TiePolicy::prefer_empty);
    EXPECT_EQ(cfg.bins.upper_bounds, (std::vector<std::size_t>{0, 2, 10}));
    EXPECT_THROW(experiment_from_json(nlohmann::json::parse(R"({"specs": []})")), config_error);
}
