"""Test words, presentations and the presentation DSL."""

import pytest

from fpcensus.errors import CensusError, PresentationSyntaxError, UnknownGeneratorError
from fpcensus.presentation import (
    Presentation,
    Word,
    cyclic_reduce,
    exponent_sums,
    format_presentation,
    format_word,
    free_reduce,
    parse_presentation,
    parse_word,
    parse_words,
    presentation_to_json,
)


class TestWords:
    """Test word arithmetic and reduction."""

    def test_free_reduce_cancels_nested_pairs(self):
        """Test that nested inverse pairs cancel completely."""
        assert free_reduce(Word((1, 2, -2, -1, 3))) == Word((3,))

    def test_cyclic_reduce_strips_conjugation(self):
        """Test that a conjugate is stripped down to its core."""
        assert cyclic_reduce(Word((1, 2, 2, -1))) == Word((2, 2))

    def test_multiplication_reduces(self):
        """Test that products are freely reduced."""
        assert Word((1, 2)) * Word((-2, 3)) == Word((1, 3))

    def test_inverse_and_power(self):
        """Test formal inverses and negative powers."""
        assert ~Word((1, 2)) == Word((-2, -1))
        assert Word((1,)) ** -3 == Word((-1, -1, -1))
        assert Word((1, 2)) ** 0 == Word()

    def test_zero_letter_rejected(self):
        """Test that 0 is not a generator index."""
        with pytest.raises(ValueError):
            Word((1, 0))

    def test_exponent_sums(self):
        """Test exponent sums per generator."""
        assert exponent_sums(Word((1, 1, -2, 1)), 3) == [3, -1, 0]


class TestPresentation:
    """Test presentation construction."""

    def test_relators_are_reduced_and_trivial_ones_dropped(self):
        """Test relator normalization on construction."""
        p = Presentation(("a", "b"), (Word((1, 2, -1)), Word((1, -1))))
        assert p.relators == (Word((2,)),)

    def test_duplicate_generators_rejected(self):
        """Test that generator names must be unique."""
        with pytest.raises(ValueError):
            Presentation(("a", "a"))

    def test_out_of_range_relator_rejected(self):
        """Test that relators may only use declared generators."""
        with pytest.raises(ValueError):
            Presentation(("a",), (Word((2,)),))

    def test_empty_generator_list_rejected(self):
        """Test that at least one generator is required."""
        with pytest.raises(ValueError):
            Presentation(())


class TestParser:
    """Test the presentation DSL."""

    def test_parse_simple_presentation(self):
        """Test a presentation with powers and a product."""
        p = parse_presentation("< a, b | a^2, b^3, (a*b)^7 >")
        assert p.generator_names == ("a", "b")
        assert p.relators == (Word((1, 1)), Word((2, 2, 2)), Word((1, 2) * 7))

    def test_commutator_expansion(self):
        """Test that [x,y] expands to x^-1 y^-1 x y."""
        p = parse_presentation("< a, b | [a,b] >")
        assert p.relators == (Word((-1, -2, 1, 2)),)

    def test_juxtaposition_and_negative_exponent(self):
        """Test implicit multiplication and negative exponents."""
        p = parse_presentation("< a, b | a b^-2 >")
        assert p.relators == (Word((1, -2, -2)),)

    def test_nested_commutator_power(self):
        """Test exponent applied to a commutator."""
        p = parse_presentation("< x, y | [x,y]^2 >")
        assert p.relators == (Word((-1, -2, 1, 2, -1, -2, 1, 2)),)

    def test_identity_literal_and_free_group(self):
        """Test literal 1 and an empty relator list."""
        assert parse_presentation("< a | 1 >").relators == ()
        assert parse_presentation("< a, b | >").relators == ()
        assert parse_presentation("< a, b >").relators == ()

    def test_comments_and_newlines(self):
        """Test that comments and line breaks are ignored."""
        text = "# the cyclic group\n< a |\n  a^5  # order five\n>\n"
        assert parse_presentation(text).relators == (Word((1,) * 5),)

    def test_unknown_generator_position(self):
        """Test that unknown names report line and column."""
        with pytest.raises(UnknownGeneratorError) as info:
            parse_presentation("< a, b | a^2, c >")
        assert info.value.name == "c"
        assert (info.value.line, info.value.column) == (1, 15)

    def test_unknown_generator_on_second_line(self):
        """Test positions across line breaks."""
        with pytest.raises(UnknownGeneratorError) as info:
            parse_presentation("< a |\n  a^2 b >")
        assert (info.value.line, info.value.column) == (2, 7)

    def test_duplicate_generator_is_syntax_error(self):
        """Test that a repeated generator name is rejected."""
        with pytest.raises(PresentationSyntaxError):
            parse_presentation("< a, a | a^2 >")

    def test_unterminated_presentation(self):
        """Test that a missing closing bracket is rejected."""
        with pytest.raises(PresentationSyntaxError):
            parse_presentation("< a | a^2")

    def test_bad_character(self):
        """Test that stray characters are reported with a position."""
        with pytest.raises(PresentationSyntaxError) as info:
            parse_presentation("< a | a$ >")
        assert info.value.column == 8

    def test_nesting_limit(self):
        """Test that nesting past the limit is a positioned syntax error."""
        shallow = "< a | " + "(" * 100 + "a" + ")" * 100 + " >"
        assert parse_presentation(shallow).relators == (Word((1,)),)
        deep = "< a | " + "(" * 400 + "a" + ")" * 400 + "^2 >"
        with pytest.raises(PresentationSyntaxError) as info:
            parse_presentation(deep)
        assert (info.value.line, info.value.column) == (1, 107)

    def test_expansion_limit(self):
        """Test that oversized exponents are rejected at the exponent."""
        with pytest.raises(PresentationSyntaxError) as info:
            parse_presentation("< a | a^1000000000 >")
        assert (info.value.line, info.value.column) == (1, 9)
        with pytest.raises(PresentationSyntaxError):
            parse_presentation("< a, b | (a*b)^600000 >")
        assert parse_presentation("< a | a^1000 >").relators[0] == Word((1,) * 1000)

    def test_syntax_errors_are_census_errors(self):
        """Test the error hierarchy."""
        with pytest.raises(CensusError):
            parse_presentation("a, b")
        with pytest.raises(ValueError):
            parse_presentation("< a | a^ >")

    def test_parse_word_and_word_list(self):
        """Test standalone words and comma lists with commutators inside."""
        names = ("s", "t")
        assert parse_word("t*s*t^-1", names) == Word((2, 1, -2))
        words = parse_words("s, [s,t], t^2", names)
        assert words == [Word((1,)), Word((-1, -2, 1, 2)), Word((2, 2))]
        assert parse_words("", names) == []


class TestFormatting:
    """Test serialization back to the DSL."""

    def test_format_word_syllables(self):
        """Test syllable form of a word."""
        assert format_word(Word((1, 1, -2, 1)), ("a", "b")) == "a^2*b^-1*a"
        assert format_word(Word(), ("a",)) == "1"

    def test_format_then_parse_is_fixed_point(self):
        """Test that formatting and reparsing gives the same presentation."""
        p = parse_presentation("< a, b, c | a^3, [a,b]^2, (a*c^-1)^4, b a b^-1 a^-2 >")
        assert parse_presentation(format_presentation(p)) == p

    def test_presentation_to_json(self):
        """Test the canonical JSON form."""
        data = presentation_to_json(parse_presentation("< a, b | a^2, [a,b] >"))
        assert data == {
            "generators": ["a", "b"],
            "relators": [[1, 1], [-1, -2, 1, 2]],
            "text": "< a, b | a^2, a^-1*b^-1*a*b >",
        }
