import datetime as dt
import random

import numpy as np
import pytest

from banktone.corpus import (
    MacroTable,
    MinutesDocument,
    load_corpus,
    load_macro,
    segment,
    split_sentences,
    tokenize,
)
from banktone.errors import (
    AlignmentError,
    EmptyCorpusError,
    FormatError,
    InputIOError,
)
from banktone.months import month_index, month_label


def test_tokenize_hyphens_split_and_case_folds():
    assert tokenize("risk-averse Firms") == ["risk", "averse", "firms"]


def test_tokenize_drops_embedded_punctuation_in_place():
    assert tokenize("don't") == ["dont"]
    assert tokenize("U.S.") == ["us"]
    assert tokenize("3.5%") == []
    assert tokenize("inflation, however,") == ["inflation", "however"]


def test_tokenize_empty_iff_no_letters():
    rng = random.Random(20260815)
    alphabet = "abcXYZ0189 .,-!?%$'\t\n"
    for _ in range(300):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
        tokens = tokenize(text)
        has_letter = any(c.isalpha() for c in text)
        assert (len(tokens) > 0) == has_letter
        for tok in tokens:
            assert tok == tok.lower()
            assert tok.isalpha()


def test_abbreviation_does_not_split_sentence():
    assert split_sentences("The U.S. economy grew.") == ["The U.S. economy grew."]


def test_plain_terminators_split():
    text = "Inflation rose. Growth slowed! Did policy respond? Yes."
    assert split_sentences(text) == [
        "Inflation rose.", "Growth slowed!", "Did policy respond?", "Yes.",
    ]


def test_terminator_without_uppercase_does_not_split():
    assert split_sentences("Prices rose 1.5 percent. then fell.") == [
        "Prices rose 1.5 percent. then fell.",
    ]


def test_month_abbreviation_suppressed():
    text = "The meeting of Jan. Smith adjourned. Members left."
    assert split_sentences(text) == [
        "The meeting of Jan. Smith adjourned.", "Members left.",
    ]


def test_segment_ordinals_dense_and_keyed():
    doc = MinutesDocument(dt.date(2006, 1, 31), dt.date(2006, 2, 21),
                          "Inflation rose. Mr. Smith dissented. Growth held.")
    records = segment(doc)
    assert [r.ordinal for r in records] == [0, 1, 2]
    assert {r.document_key for r in records} == {"2006-01-31"}
    assert records[1].text == "Mr. Smith dissented."
    assert records[0].tokens == ("inflation", "rose")


def test_document_invariants():
    with pytest.raises(FormatError):
        MinutesDocument(dt.date(2006, 3, 1), dt.date(2006, 2, 1), "text")
    with pytest.raises(FormatError):
        MinutesDocument(dt.date(2006, 3, 1), dt.date(2006, 3, 20), "")


def _write_corpus(tmp_path, names_texts):
    d = tmp_path / "corpus"
    d.mkdir()
    for name, text in names_texts:
        (d / name).write_text(text, encoding="utf-8")
    return d


def test_load_corpus_directory_sorted_by_meeting_date(tmp_path):
    d = _write_corpus(tmp_path, [
        ("2006-03-28.txt", "Later meeting."),
        ("2006-01-31.txt", "Earlier meeting."),
    ])
    docs = load_corpus(d)
    assert [doc.meeting_date for doc in docs] == [
        dt.date(2006, 1, 31), dt.date(2006, 3, 28),
    ]
    # publication defaults to meeting date plus 21 days
    assert docs[0].publication_date == dt.date(2006, 2, 21)


def test_load_corpus_manifest_with_explicit_publication(tmp_path):
    (tmp_path / "a.txt").write_text("First text.", encoding="utf-8")
    (tmp_path / "b.txt").write_text("Second text.", encoding="utf-8")
    manifest = tmp_path / "docs.csv"
    manifest.write_text(
        "meeting_date,publication_date,path\n"
        "2006-05-10,2006-06-01,a.txt\n"
        "2006-03-28,,b.txt\n",
        encoding="utf-8",
    )
    docs = load_corpus(manifest)
    assert docs[0].meeting_date == dt.date(2006, 3, 28)
    assert docs[0].publication_date == dt.date(2006, 4, 18)
    assert docs[1].publication_date == dt.date(2006, 6, 1)


def test_load_corpus_errors(tmp_path):
    with pytest.raises(InputIOError):
        load_corpus(tmp_path / "nowhere")
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(EmptyCorpusError):
        load_corpus(empty)
    bad = _write_corpus(tmp_path, [("minutes.txt", "No date here.")])
    with pytest.raises(FormatError):
        load_corpus(bad)


def _write_macro(tmp_path, text):
    p = tmp_path / "macro.csv"
    p.write_text(text, encoding="utf-8")
    return p


def test_load_macro_contiguous_grid_with_gaps_as_nan(tmp_path):
    p = _write_macro(tmp_path,
                     "month,HCPI,y\n"
                     "2006-01,2.0,0.5\n"
                     "2006-03,2.2,NA\n")
    table = load_macro(p)
    assert table.start == month_index("2006-01")
    assert len(table) == 3
    assert table.month_labels() == ["2006-01", "2006-02", "2006-03"]
    hcpi = table.column("HCPI")
    assert hcpi[0] == 2.0 and np.isnan(hcpi[1]) and hcpi[2] == 2.2
    assert np.isnan(table.column("y")[2])


def test_load_macro_duplicate_month_rejected(tmp_path):
    p = _write_macro(tmp_path,
                     "month,HCPI\n2006-01,2.0\n2006-01,2.1\n")
    with pytest.raises(FormatError):
        load_macro(p)


def test_load_macro_non_numeric_cell_names_location(tmp_path):
    p = _write_macro(tmp_path,
                     "month,HCPI\n2006-01,2.0\n2006-02,oops\n")
    with pytest.raises(FormatError) as exc:
        load_macro(p)
    assert "HCPI" in str(exc.value)
    assert "2006-02" in str(exc.value)


def test_macro_window_complete_or_error():
    table = MacroTable(start=month_index("2006-01"),
                       columns={"y": np.array([1.0, np.nan, 3.0, 4.0])})
    got = table.window("y", month_index("2006-03"), month_index("2006-04"))
    assert got.tolist() == [3.0, 4.0]
    with pytest.raises(AlignmentError):
        table.window("y", month_index("2006-01"), month_index("2006-02"))
    with pytest.raises(AlignmentError):
        table.window("y", month_index("2006-03"), month_index("2006-05"))
    with pytest.raises(AlignmentError):
        table.window("missing", month_index("2006-03"), month_index("2006-04"))


def test_month_arithmetic_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        idx = rng.randrange(1900 * 12, 2100 * 12)
        assert month_index(month_label(idx)) == idx
    assert month_label(month_index("2006-01") + 1) == "2006-02"
    assert month_label(month_index("2006-12") + 1) == "2007-01"
