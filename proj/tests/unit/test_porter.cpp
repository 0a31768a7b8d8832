#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "confkern/porter.hpp"

using confkern::porter_stem;

TEST_SUITE_BEGIN("porter");

TEST_CASE("step 1a plurals") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("ties") == "ti");
    CHECK(porter_stem("caress") == "caress");
    CHECK(porter_stem("cats") == "cat");
    CHECK(porter_stem("prices") == "price");
}

TEST_CASE("step 1b ed/ing") {
    CHECK(porter_stem("feed") == "feed");
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("plastered") == "plaster");
    CHECK(porter_stem("bled") == "bled");
    CHECK(porter_stem("motoring") == "motor");
    CHECK(porter_stem("sing") == "sing");
    CHECK(porter_stem("conflated") == "conflat");
    CHECK(porter_stem("troubled") == "troubl");
    CHECK(porter_stem("sized") == "size");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("tanned") == "tan");
    CHECK(porter_stem("falling") == "fall");
    CHECK(porter_stem("hissing") == "hiss");
    CHECK(porter_stem("fizzed") == "fizz");
    CHECK(porter_stem("failing") == "fail");
    CHECK(porter_stem("filing") == "file");
}

TEST_CASE("step 1c y -> i") {
    CHECK(porter_stem("happy") == "happi");
    CHECK(porter_stem("sky") == "sky");  // no vowel in the stem
}

TEST_CASE("step 2 double suffixes") {
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"relational", "relat"},     {"conditional", "condit"},
        {"rational", "ration"},      {"valenci", "valenc"},
        {"hesitanci", "hesit"},      {"digitizer", "digit"},
        {"radicalli", "radic"},      {"differentli", "differ"},
        {"vileli", "vile"},          {"analogousli", "analog"},
        {"vietnamization", "vietnam"}, {"predication", "predic"},
        {"operator", "oper"},        {"feudalism", "feudal"},
        {"decisiveness", "decis"},   {"hopefulness", "hope"},
        {"callousness", "callous"},  {"formaliti", "formal"},
        {"sensitiviti", "sensit"},   {"sensibiliti", "sensibl"},
    };
    for (const auto& [word, stem] : pairs) {
        CAPTURE(word);
        CHECK(porter_stem(word) == stem);
    }
}

TEST_CASE("step 3") {
    CHECK(porter_stem("triplicate") == "triplic");
    CHECK(porter_stem("formative") == "form");
    CHECK(porter_stem("formalize") == "formal");
    CHECK(porter_stem("electriciti") == "electr");
    CHECK(porter_stem("electrical") == "electr");
    CHECK(porter_stem("hopeful") == "hope");
    CHECK(porter_stem("goodness") == "good");
}

TEST_CASE("step 4 residual suffixes") {
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"revival", "reviv"},       {"allowance", "allow"},
        {"inference", "infer"},     {"airliner", "airlin"},
        {"gyroscopic", "gyroscop"}, {"adjustable", "adjust"},
        {"defensible", "defens"},   {"irritant", "irrit"},
        {"replacement", "replac"},  {"adjustment", "adjust"},
        {"dependent", "depend"},    {"adoption", "adopt"},
        {"homologou", "homolog"},   {"communism", "commun"},
        {"activate", "activ"},      {"angulariti", "angular"},
        {"homologous", "homolog"},  {"effective", "effect"},
        {"bowdlerize", "bowdler"},
    };
    for (const auto& [word, stem] : pairs) {
        CAPTURE(word);
        CHECK(porter_stem(word) == stem);
    }
}

TEST_CASE("step 5 final e and double l") {
    CHECK(porter_stem("probate") == "probat");
    CHECK(porter_stem("rate") == "rate");
    CHECK(porter_stem("cease") == "ceas");
    CHECK(porter_stem("controll") == "control");
    CHECK(porter_stem("roll") == "roll");
}

TEST_CASE("short words pass through") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("ion") == "ion");
}

TEST_CASE("flow words from the reuters domain") {
    CHECK(porter_stem("prices") == "price");
    CHECK(porter_stem("shares") == "share");
    CHECK(porter_stem("earnings") == "earn");
    CHECK(porter_stem("acquisition") == "acquisit");
    CHECK(porter_stem("trading") == "trade");
}

TEST_SUITE_END();
