"""Expression trees, their surface realization, and the inverse parser.

The surface grammar is regular::

    ARTICLE SIZE? (COLOR ("and" COLOR)?)? ATTR? NOUN LOCATION?

``render`` and ``parse_expression`` are exact inverses on valid trees.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable
from dataclasses import dataclass

from refgen.cues import (
    LOCATION_PHRASES,
    SIZE_FORMS,
    AttrCue,
    ClassCue,
    ColorCue,
    Cue,
    LocationCue,
    SizeCue,
)
from refgen.errors import ExpressionParseError

ARTICLES = ("a", "an", "the")
FUNCTION_WORDS = frozenset({"a", "an", "the", "and"})
VOWELS = frozenset("aeiou")

# longest phrase first so "in the back right" wins over "in the back"
_LOCATIONS_BY_LENGTH = sorted(LOCATION_PHRASES, key=lambda p: -len(p.split()))


def choose_article(size: str | None, first_word: str) -> str:
    """Definite with any size form, otherwise a/an by the next word's first letter."""
    if size is not None:
        return "the"
    return "an" if first_word[:1] in VOWELS else "a"


@dataclass(frozen=True)
class ExpressionAst:
    article: str
    noun: str
    size: str | None = None
    colors: tuple[str, ...] = ()
    attribute: str | None = None
    location: str | None = None

    def __post_init__(self) -> None:
        if not self.noun:
            raise ValueError("noun must be non-empty")
        if self.size is not None and self.size not in SIZE_FORMS:
            raise ValueError(f"unknown size form {self.size!r}")
        if len(self.colors) > 2:
            raise ValueError("at most two colors")
        if self.location is not None and self.location not in LOCATION_PHRASES:
            raise ValueError(f"unknown location phrase {self.location!r}")
        expected = choose_article(self.size, self.modifier_words()[0])
        if self.article != expected:
            raise ValueError(f"article must be {expected!r}, got {self.article!r}")

    def modifier_words(self) -> list[str]:
        """Words after the article, in surface order."""
        words: list[str] = []
        if self.size:
            words.append(self.size)
        for i, color in enumerate(self.colors):
            if i:
                words.append("and")
            words.extend(color.split())
        if self.attribute:
            words.extend(self.attribute.split())
        words.extend(self.noun.split())
        if self.location:
            words.extend(self.location.split())
        return words

    def words(self) -> list[str]:
        return [self.article, *self.modifier_words()]

    @property
    def cue_tags(self) -> frozenset[str]:
        tags = {"class"}
        if self.size:
            tags.add("size")
        if self.location:
            tags.add("location")
        if self.colors:
            tags.add("color")
        if self.attribute:
            tags.add("attribute")
        return frozenset(tags)


def build_ast(
    noun: str,
    size: str | None = None,
    colors: Iterable[str] = (),
    attribute: str | None = None,
    location: str | None = None,
) -> ExpressionAst:
    """Construct a tree, filling in the article."""
    colors = tuple(colors)
    first = size or (colors[0] if colors else None) or attribute or noun
    article = choose_article(size, first.split()[0])
    return ExpressionAst(article, noun, size, colors, attribute, location)


def compose(cues: Iterable[Cue]) -> ExpressionAst:
    """Arrange a selection of cues in the fixed order and add the article."""
    noun = size = attribute = location = None
    colors: tuple[str, ...] = ()
    for cue in cues:
        if isinstance(cue, ClassCue):
            noun = cue.category
        elif isinstance(cue, SizeCue):
            size = cue.form
        elif isinstance(cue, LocationCue):
            location = cue.phrase
        elif isinstance(cue, ColorCue):
            colors = cue.colors
        elif isinstance(cue, AttrCue):
            attribute = cue.name
        else:
            raise TypeError(f"not a cue: {cue!r}")
    if noun is None:
        raise ValueError("a class cue is required")
    return build_ast(noun, size, colors, attribute, location)


def render(ast: ExpressionAst) -> str:
    return " ".join(ast.words())


def word_count(text: str) -> int:
    return len(text.split())


def _longest_prefix(tokens: list[str], start: int, stop: int, phrases: Collection[str]) -> int:
    """Length of the longest phrase in ``phrases`` starting at ``start``; 0 if none."""
    for k in range(stop - start, 0, -1):
        if " ".join(tokens[start : start + k]) in phrases:
            return k
    return 0


def parse_expression(
    text: str, category_table: Collection[str], color_lexicon: Collection[str]
) -> ExpressionAst:
    """Parse text produced by :func:`render` back into a tree.

    A word that is both a color and a category is read as the noun when it
    can be; nouns are matched longest-first from the category table.
    """
    tokens = text.split()
    categories = frozenset(category_table)
    colors = frozenset(color_lexicon)

    def fail(message: str, position: int) -> ExpressionParseError:
        return ExpressionParseError(f"{message} in {text!r}", text=text, position=position)

    if not tokens:
        raise fail("empty expression", 0)
    article = tokens[0]
    if article not in ARTICLES:
        raise fail(f"expected an article, got {article!r}", 0)

    end = len(tokens)
    location = None
    for phrase in _LOCATIONS_BY_LENGTH:
        k = len(phrase.split())
        if end - k >= 2 and tokens[end - k :] == phrase.split():
            location = phrase
            end -= k
            break

    noun_start = None
    for start in range(1, end):
        if " ".join(tokens[start:end]) in categories:
            noun_start = start
            break
    if noun_start is None:
        raise fail("expected a category noun", end - 1)
    noun = " ".join(tokens[noun_start:end])

    i = 1
    size = None
    if i < noun_start and tokens[i] in SIZE_FORMS:
        size = tokens[i]
        i += 1

    found: list[str] = []
    k = _longest_prefix(tokens, i, noun_start, colors)
    if k:
        found.append(" ".join(tokens[i : i + k]))
        i += k
        if i < noun_start and tokens[i] == "and":
            k = _longest_prefix(tokens, i + 1, noun_start, colors)
            if not k:
                raise fail("expected a color after 'and'", i + 1)
            found.append(" ".join(tokens[i + 1 : i + 1 + k]))
            i += 1 + k

    attribute = None
    if i < noun_start:
        rest = tokens[i:noun_start]
        for j, tok in enumerate(rest, start=i):
            if tok in FUNCTION_WORDS or tok in SIZE_FORMS:
                raise fail(f"unexpected word {tok!r}", j)
        attribute = " ".join(rest)
        if attribute in colors:
            raise fail(f"{attribute!r} is a color, not an attribute", i)

    try:
        return ExpressionAst(article, noun, size, tuple(found), attribute, location)
    except ValueError as exc:
        raise fail(str(exc), 0) from exc
