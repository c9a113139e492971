"""Small builders shared by the test modules."""

from esmin.errors import NotAMorphism
from esmin.folding import check_folding
from esmin.maps import EventMap
from esmin.poset import PosetConfig


def cfg(events: str, *pairs: str) -> PosetConfig:
    """``cfg("a c", "a<c")``: a configuration from short strings."""
    order = [tuple(p.split("<")) for p in pairs]
    return PosetConfig.build(events.split(), order)


def is_folding(f: EventMap) -> bool:
    try:
        return check_folding(f).verdict
    except NotAMorphism:
        return False
