"""Name normalization, catalog loading, and in-text entity matching."""

import pytest

from snipgraph.catalog import (
    CatalogLoadError,
    Entity,
    EntityCatalog,
    collapse_ws,
    find_entities,
    find_entity_matches,
    load_catalog,
    load_catalog_file,
    normalize_name,
    phrase_regex,
)

from conftest import make_catalog


class TestNormalizeName:
    def test_casefold_and_whitespace(self):
        assert normalize_name("  Ada \t VEIL \n") == "ada veil"

    def test_nfc_equivalence(self):
        composed = "René Falk"
        decomposed = "René Falk"
        assert normalize_name(composed) == normalize_name(decomposed)

    def test_casefold_beats_lower(self):
        # eszett only folds under casefold, not lower()
        assert normalize_name("Weiß") == "weiss"


def test_collapse_ws():
    assert collapse_ws("a \n\t b  c") == "a b c"


class TestEntityCatalog:
    def test_add_and_lookup_variants(self):
        catalog = EntityCatalog()
        assert catalog.add("Ada Veil")
        assert "ada  VEIL" in catalog
        assert catalog.canonical(" ADA VEIL ") == "Ada Veil"
        assert catalog.canonical("Bo Quist") is None

    def test_add_rejects_blank_and_duplicates(self):
        catalog = EntityCatalog()
        assert not catalog.add("   ")
        assert catalog.add("Ada Veil")
        assert not catalog.add("ADA VEIL")
        # first spelling wins
        assert catalog.canonical("ada veil") == "Ada Veil"
        assert len(catalog) == 1

    def test_load_counts(self):
        lines = ["Ada Veil\n", "\n", "ada veil\n", "Bo Quist\n", "# not a comment, a name\n"]
        catalog = load_catalog(lines)
        assert catalog.loaded == 3
        assert catalog.skipped == 2
        assert "# not a comment, a name" in catalog

    def test_load_file_bad_encoding(self, tmp_path):
        path = tmp_path / "names.txt"
        path.write_bytes(b"Ada Veil\n\xff\xfe broken\n")
        with pytest.raises(CatalogLoadError, match="invalid UTF-8"):
            load_catalog_file(str(path))


class TestPhraseRegex:
    def test_word_boundaries(self):
        rx = phrase_regex("and")
        assert rx.search("x and y")
        assert not rx.search("sandy")
        assert not rx.search("anders")

    def test_punctuation_flush(self):
        assert phrase_regex("&").search("A&B")

    def test_internal_whitespace_run(self):
        assert phrase_regex("speaks with").search("speaks \n with")

    def test_case_sensitive_option(self):
        assert phrase_regex("and").search("AND")
        assert not phrase_regex("and", ignore_case=False).search("AND")


class TestFindEntityMatches:
    def test_simple_and_case_insensitive(self, catalog):
        hits = find_entity_matches("saw ADA  VEIL with Bo Quist", catalog)
        assert [name for name, _s, _e in hits] == ["Ada Veil", "Bo Quist"]

    def test_spans_slice_back_to_text(self, catalog):
        text = "gala: Ada Veil, Bo Quist."
        for name, start, end in find_entity_matches(text, catalog):
            assert normalize_name(text[start:end]) == normalize_name(name)

    def test_longest_match_wins(self):
        catalog = make_catalog(["Bo Quist", "Bo Quist Senior"])
        hits = find_entity_matches("met Bo Quist Senior today", catalog)
        assert [name for name, _s, _e in hits] == ["Bo Quist Senior"]

    def test_token_bounded(self, catalog):
        assert find_entity_matches("xAda Veil and Bo Quistx", catalog) == []
        assert len(find_entity_matches("(Ada Veil)", catalog)) == 1

    def test_empty_catalog(self):
        assert find_entity_matches("Ada Veil", EntityCatalog()) == []


class TestFindEntities:
    def test_byte_spans_non_ascii(self, catalog):
        text = "café with Ada Veil tonight"
        [(entity, (start, end))] = find_entities(text, catalog)
        assert entity == Entity("Ada Veil")
        assert text.encode("utf-8")[start:end].decode("utf-8") == "Ada Veil"

    def test_ascii_spans_match_char_spans(self, catalog):
        text = "Ada Veil and Bo Quist"
        byte_spans = [span for _e, span in find_entities(text, catalog)]
        char_spans = [(s, e) for _n, s, e in find_entity_matches(text, catalog)]
        assert byte_spans == char_spans
