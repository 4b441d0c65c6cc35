#include <doctest.h>

#include "pathlogic/formula.hpp"
#include "random_formulas.hpp"

using namespace pathlogic;

TEST_SUITE("formula") {
  TEST_CASE("precedence binds negation, then and, then or, then implication") {
    const Formula f = parse_formula("-a & b | c -> d");
    CHECK(f == implies(lor(land(neg(atom("a")), atom("b")), atom("c")), atom("d")));
  }

  TEST_CASE("binary connectives associate to the right") {
    CHECK(parse_formula("a -> b -> c") == implies(atom("a"), implies(atom("b"), atom("c"))));
    CHECK(parse_formula("a | b | c") == lor(atom("a"), lor(atom("b"), atom("c"))));
    CHECK(format_formula(implies(implies(atom("a"), atom("b")), atom("c"))) == "(a -> b) -> c");
    CHECK(format_formula(implies(atom("a"), implies(atom("b"), atom("c")))) == "a -> b -> c");
  }

  TEST_CASE("ground atoms with arguments") {
    const Formula f = parse_formula("enter(emma)");
    REQUIRE(f.is_atom());
    CHECK(f.atom().predicate == "enter");
    CHECK(f.atom().args == std::vector<std::string>{"emma"});
    CHECK(format_formula(parse_formula("owns(emma,key_2) & -lost(key_2)")) == "owns(emma,key_2) & -lost(key_2)");
  }

  TEST_CASE("double negation keeps its parentheses") {
    CHECK(format_formula(neg(neg(atom("p")))) == "-(-p)");
    CHECK(parse_formula("-(-p)") == neg(neg(atom("p"))));
    CHECK(format_formula(neg(lor(atom("p"), atom("q")))) == "-(p | q)");
  }

  TEST_CASE("trailing period is accepted") { CHECK(parse_formula("p -> q.") == implies(atom("p"), atom("q"))); }

  TEST_CASE("syntax errors report an offset") {
    for (const char* bad : {"", "p ->", "(p", "p q", "-", "p & & q", "P", "p(", "p(a,)"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_formula(bad), ParseError);
    }
    try {
      parse_formula("p -> ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() >= 2);
    }
  }

  TEST_CASE("format then parse is the identity on random formulas") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
      const Formula f = testgen::random_formula(rng, 5, 6);
      const std::string text = format_formula(f);
      CAPTURE(text);
      CHECK(parse_formula(text) == f);
    }
  }

  TEST_CASE("structural equality, ordering and hashing agree") {
    const Formula a = parse_formula("p -> q | r");
    const Formula b = implies(atom("p"), lor(atom("q"), atom("r")));
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK((a <=> b) == std::strong_ordering::equal);
    CHECK(a != parse_formula("(p -> q) | r"));
    CHECK(a.size() == 5);
  }

  TEST_CASE("literals and atom collection") {
    CHECK(parse_formula("p").is_literal());
    CHECK(parse_formula("-p(a)").is_literal());
    CHECK_FALSE(parse_formula("-(-p)").is_literal());
    CHECK_FALSE(parse_formula("p | q").is_literal());
    CHECK(atoms_of(parse_formula("p -> q(a) & p")).size() == 2);
  }

  TEST_CASE("identifier grammar for atoms") {
    CHECK(is_identifier("enter"));
    CHECK(is_identifier("a1_b"));
    CHECK_FALSE(is_identifier("Enter"));
    CHECK_FALSE(is_identifier("1a"));
    CHECK_THROWS_AS(make_atom("Bad"), std::invalid_argument);
  }

  TEST_CASE("same_shape ignores atom names") {
    CHECK(same_shape(parse_formula("a -> -b"), parse_formula("x(c) -> -y")));
    CHECK_FALSE(same_shape(parse_formula("a -> b"), parse_formula("a | b")));
  }
}
