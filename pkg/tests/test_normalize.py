import pytest
from hypothesis import given, strategies as st

from bridgegram import bridge_words, normalize_word

words = st.text(
    st.characters(min_codepoint=33, max_codepoint=0x2FF), min_size=1, max_size=12
)


class TestNormalizeWord:
    def test_accented_doubled_word(self):
        assert normalize_word("friéndd") == "friend"

    def test_standard_repetitions_collapse(self):
        assert normalize_word("success") == "suces"

    def test_emphatic_repetitions_collapse(self):
        assert normalize_word("daaammn") == "damn"

    def test_already_normalized(self):
        assert normalize_word("no") == "no"

    def test_lowercases(self):
        assert normalize_word("FrIeND") == "friend"

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            normalize_word("")

    def test_digits_and_punctuation_are_ordinary(self):
        assert normalize_word("l0ll") == "l0l"
        assert normalize_word("a--b!!") == "a-b!"

    @given(words)
    def test_idempotent(self, word):
        once = normalize_word(word)
        if once:
            assert normalize_word(once) == once

    @given(words)
    def test_no_adjacent_repeats_remain(self, word):
        result = normalize_word(word)
        assert all(a != b for a, b in zip(result, result[1:]))


class TestBridgeWords:
    def test_friend_bridges(self):
        result = bridge_words("friend")
        assert result.bridges == ("riend", "fiend", "frend", "frind", "fried", "frien")

    def test_deletion_connects_time_tome_tame(self):
        for word in ("time", "tome", "tame"):
            assert "tme" in bridge_words(word).bridges

    def test_single_character_after_collapse_has_no_bridges(self):
        result = bridge_words("aa")
        assert result.normalized == "a"
        assert result.bridges == ()

    def test_source_and_normalized_recorded(self):
        result = bridge_words("Frièndd")
        assert result.source == "Frièndd"
        assert result.normalized == "friend"
        assert result.bridges == bridge_words("friend").bridges

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            bridge_words("")

    def test_one_substitution_apart_words_share_bridges(self):
        # the classic pair: swap makes them one substitution apart at two spots
        shared = set(bridge_words("friend").bridges) & set(bridge_words("freind").bridges)
        assert {"frind", "frend"} <= shared

    @given(words)
    def test_each_bridge_is_one_deletion_of_the_normalized_form(self, word):
        result = bridge_words(word)
        norm = result.normalized
        all_deletions = {norm[:j] + norm[j + 1 :] for j in range(len(norm))}
        for bridge in result.bridges:
            assert len(bridge) == len(norm) - 1
            assert bridge in all_deletions

    @given(words)
    def test_bridge_count_bounded_by_length(self, word):
        result = bridge_words(word)
        assert len(result.bridges) <= len(result.normalized)
        assert len(set(result.bridges)) == len(result.bridges)

    @given(words, st.characters(min_codepoint=97, max_codepoint=122), st.integers(0, 30))
    def test_substitution_yields_common_bridge(self, word, letter, pos):
        base = normalize_word(word)
        if len(base) < 2:
            return
        pos %= len(base)
        if base[pos] == letter:
            return
        # substituting one character: deleting it from either word meets
        other = base[:pos] + letter + base[pos + 1 :]
        expected = base[:pos] + base[pos + 1 :]
        assert expected in bridge_words(base).bridges
        if normalize_word(other) == other:  # substitution may create a run
            assert expected in bridge_words(other).bridges
