import numpy as np
import pytest

from palette_turan.admit import (AdmissionCertificate, automorphisms, check_certificate,
                                 decide_admission, order_classes)
from palette_turan.bounds import star_palette
from palette_turan.exceptions import BudgetExceeded, MalformedCertificateError
from palette_turan.hypergraph import ThreeGraph, complete_graph, star
from palette_turan.palette import Palette, random_palette


def test_star3_refuses_its_palette():
    v = decide_admission(star(3), star_palette(3))
    assert not v.admits
    assert v.order_classes == 4


def test_single_edge_admits_any_nonempty_palette():
    p = Palette(2, [(1, 0, 1)])
    v = decide_admission(ThreeGraph(3, [(0, 1, 2)]), p)
    assert v.admits
    assert check_certificate(ThreeGraph(3, [(0, 1, 2)]), p, v.certificate)


def test_empty_palette():
    assert not decide_admission(star(2), Palette.empty(2)).admits
    assert decide_admission(ThreeGraph(3), Palette.empty(2)).admits


def test_star_automorphisms():
    assert len(automorphisms(star(3))) == 6
    assert len(order_classes(star(3))) == 4
    assert len(automorphisms(complete_graph(4))) == 24
    assert len(order_classes(complete_graph(4))) == 1


def test_quotient_matches_full_enumeration():
    rng = np.random.default_rng(5)
    graphs = [star(2), star(3), complete_graph(4), ThreeGraph(5, [(0, 1, 2), (2, 3, 4), (0, 3, 4)])]
    for _ in range(30):
        g = graphs[int(rng.integers(len(graphs)))]
        p = random_palette(int(rng.integers(1, 4)), rng)
        assert decide_admission(g, p).admits == decide_admission(g, p, quotient=False).admits


def test_certificate_errors():
    g = star(2)
    p = Palette(1, [(0, 0, 0)])
    with pytest.raises(MalformedCertificateError):
        check_certificate(g, p, AdmissionCertificate((0, 1), {}))
    with pytest.raises(MalformedCertificateError):
        check_certificate(g, p, AdmissionCertificate((0, 1, 2), {(0, 1): 0}))


def test_certificate_json():
    v = decide_admission(star(3), Palette.complete(2))
    cert = AdmissionCertificate.from_json(v.certificate.to_json())
    assert cert == v.certificate


def test_vertex_guard():
    with pytest.raises(BudgetExceeded):
        decide_admission(star(8), Palette.complete(1))
