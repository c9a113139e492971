from esmin.dot import export_config_dot, export_dot
from esmin.models import PrimeES, as_event_structure


def edges(text):
    return [line for line in text.splitlines() if " -> " in line]


def nodes(text):
    return [line for line in text.splitlines() if "label=" in line and " -> " not in line]


def test_pes(es):
    text = export_dot(es("p2"))
    assert text.startswith('digraph "p2" {')
    assert len(nodes(text)) == 4
    assert '"a12" [label="a12:a"];' in text
    solid = [e for e in edges(text) if "dotted" not in e]
    dotted = [e for e in edges(text) if "dotted" in e]
    assert solid == ['    "a12" -> "b12";']
    assert dotted == ['    "a12" -> "b3" [dir="none", style="dotted"];']


def test_asymmetric_conflict_is_directed(es):
    text = export_dot(es("a0"))
    assert '    "a12" -> "b123" [style="dotted"];' in text


def test_configurations(es):
    text = export_config_dot(es("p2"))
    assert len(nodes(text)) == 8
    assert '"c0" [label="{}"];' in text
    assert text == export_dot(as_event_structure(es("p2")))


def test_empty_structure():
    text = export_dot(PrimeES.build([]))
    assert nodes(text) == []
    assert edges(text) == []


def test_map(fmap):
    text = export_dot(fmap("f02", "p0", "p2"))
    assert 'subgraph "cluster_src"' in text
    dashed = [e for e in edges(text) if "dashed" in e]
    assert len(dashed) == 6
    assert '    "src:a2" -> "dst:a12" [style="dashed"];' in text


def test_output_is_deterministic(es):
    assert export_dot(es("split_a0")) == export_dot(es("split_a0"))
