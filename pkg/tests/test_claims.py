import json

import pytest

from nilherm.claims import CLAIM_IDS, UnknownClaimError, corpus, metric_family, verify_paper


def test_claim_ids_are_the_ten_criteria():
    assert CLAIM_IDS == ("partialOmega", "strongKT-a", "strongKT-b", "abelianSKT", "balanced-clasif",
                         "balanced-nonstable", "LCKgen", "SKT-LCK", "structure", "region-determinism")


def test_selection_runs_only_requested_claims():
    report = verify_paper(["partialOmega"])
    assert [r.claim for r in report.results] == ["partialOmega"]
    assert report.passed
    payload = json.loads(report.to_json())
    assert payload["passed"] and payload["claims"][0]["anchor"]


def test_unknown_claim_raises():
    with pytest.raises(UnknownClaimError):
        verify_paper(["partialOmega", "nope"])


def test_corpus_covers_catalog_algebras_with_complex_structures():
    tags = {inst.tag for inst in corpus()}
    assert {"h1", "h2", "h3", "h4", "h5", "h6", "h8", "h19minus", "h26plus"} <= tags
    assert all(g.is_positive() for g in metric_family())
    assert len(metric_family()) >= 51
