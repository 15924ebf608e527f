#include <gtest/gtest.h>

#include "support.hpp"

using namespace pcsreg;
using namespace pcsreg::test;

namespace {

Scene triangle_scene() {
  return Scene({speaker(), listener(), object("t", "triangle", {-0.3, 0.2}, "red"),
                object("c", "cuboid", {-0.3, -0.2}, "blue"), object("t2", "triangle", {0.3, 0.2}, "red")});
}

Errc parse_code(std::string_view text, const Lexicon& lex) {
  try {
    parse_expression(text, lex);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return Errc::kConfig;
}

}  // namespace

TEST(Grammar, SquareSentence) {
  const Scene s = square_scene();
  EXPECT_EQ(parse_expression("the object in front of the square", lexicon_from_scene(s)), square_expression());
  EXPECT_EQ(parse_expression("The Object  in front of the SQUARE", lexicon_from_scene(s)), square_expression());
}

TEST(Grammar, TwoUnitSentenceWithPronoun) {
  const Scene s = triangle_scene();
  const ExpressionTree t = parse_expression("the red triangle in front of the cuboid on my left", lexicon_from_scene(s));
  ASSERT_EQ(t.depth(), 2u);
  EXPECT_EQ(t.head().color, std::optional<std::string>("red"));
  EXPECT_EQ(t.head().category, std::optional<std::string>("triangle"));
  EXPECT_EQ(t.prep(), Preposition::kFront);
  EXPECT_EQ(t.landmark().head().category, std::optional<std::string>("cuboid"));
  EXPECT_EQ(t.landmark().prep(), Preposition::kLeft);
  EXPECT_EQ(t.landmark().landmark().head().person, Person::kSpeakerSelf);
  EXPECT_EQ(realize(t), "the red triangle in front of the cuboid on my left");
}

TEST(Grammar, PrepositionVariants) {
  const Lexicon lex = lexicon_from_scene(triangle_scene());
  EXPECT_EQ(parse_expression("the cuboid on the left of the triangle", lex).prep(), Preposition::kLeft);
  EXPECT_EQ(parse_expression("the cuboid to the right of the triangle", lex).prep(), Preposition::kRight);
  EXPECT_EQ(parse_expression("the cuboid behind the triangle", lex).prep(), Preposition::kBehind);
  const ExpressionTree you = parse_expression("the cuboid in front of you", lex);
  EXPECT_EQ(you.landmark().head().person, Person::kListenerSelf);
  EXPECT_EQ(parse_expression("the cuboid on your right", lex).landmark().head().person, Person::kListenerSelf);
}

TEST(Grammar, RejectsTopologicalPrepositions) {
  const Scene s = car_scene();
  EXPECT_EQ(parse_code("the block near the car", lexicon_from_scene(s)), Errc::kTopologicalPreposition);
  EXPECT_EQ(parse_code("the block next to the car", lexicon_from_scene(s)), Errc::kTopologicalPreposition);
  EXPECT_EQ(parse_code("the block between the car", lexicon_from_scene(s)), Errc::kTopologicalPreposition);
}

TEST(Grammar, RejectsMalformedInput) {
  const Lexicon lex = lexicon_from_scene(car_scene());
  EXPECT_EQ(parse_code("", lex), Errc::kExpressionParse);
  EXPECT_EQ(parse_code("block", lex), Errc::kExpressionParse);
  EXPECT_EQ(parse_code("the", lex), Errc::kExpressionParse);
  EXPECT_EQ(parse_code("the block to the left of", lex), Errc::kExpressionParse);
}

TEST(Grammar, OutOfVocabularyWordsDenoteNothing) {
  const Scene s = square_scene();
  const ExpressionTree t = parse_expression("the blue sphere", lexicon_from_scene(s));
  EXPECT_EQ(t.head().color, std::optional<std::string>("blue"));
  EXPECT_EQ(t.head().category, std::optional<std::string>("sphere"));
  EXPECT_FALSE(denote(t, s, default_preferences()).resolvable());
}

TEST(Grammar, ParseRealizeRoundTrip) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Scene scene = harness::sample_scene(harness::derive_seed(99, {i}));
    std::mt19937_64 rng(i);
    const ExpressionTree t = random_tree(rng, scene, i % 4);
    const std::string text = realize(t);
    EXPECT_EQ(parse_expression(text, lexicon_from_scene(scene)), t) << text;
  }
}

TEST(Grammar, RealizeTemplates) {
  AttributePhrase a;
  a.color = "red";
  a.category = "block";
  EXPECT_EQ(realize(a), "the red block");
  EXPECT_EQ(realize(AttributePhrase::of_person(Person::kListenerSelf)), "you");
}
