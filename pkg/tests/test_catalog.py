"""Rights catalog: builtin entries, registration, immutability."""

import json

import pytest

from hria.catalog import RightEntry, builtin_catalog, catalog_from_dict, register
from hria.errors import DuplicateKey, InvalidKey, UnknownRight

EXPECTED_KEYS = [
    "human-dignity",
    "non-discrimination",
    "personal-identity",
    "personal-integrity",
    "self-determination",
    "freedom-expression-thought",
    "assembly-association",
    "confidentiality-communications",
    "privacy-data-protection",
]


def _custom_entry(key="freedom-of-thought-child"):
    return RightEntry(
        key=key,
        title="Freedom of thought (child users)",
        description="Case-specific axis for a child-facing product.",
    )


class TestBuiltinCatalog:
    def test_nine_entries_stable_keys_and_order(self):
        catalog = builtin_catalog()
        assert list(catalog.keys()) == EXPECTED_KEYS
        assert len(set(catalog.keys())) == 9

    def test_human_dignity_title(self):
        entry = builtin_catalog().lookup("human-dignity")
        assert entry.title == "Respect for human dignity"
        assert entry.builtin

    def test_privacy_axis_present(self):
        entry = builtin_catalog().lookup("privacy-data-protection")
        assert entry.title == "Data protection and the right to privacy"

    def test_all_entries_builtin_with_titles(self):
        for entry in builtin_catalog().entries:
            assert entry.builtin
            assert entry.title

    def test_referentially_stable_serialization(self):
        a = json.dumps(builtin_catalog().to_dict(), sort_keys=True)
        b = json.dumps(builtin_catalog().to_dict(), sort_keys=True)
        assert a == b


class TestRegister:
    def test_register_extends_to_ten(self):
        catalog = register(builtin_catalog(), _custom_entry())
        assert len(catalog.entries) == 10

    def test_duplicate_key_rejected(self):
        entry = RightEntry(key="human-dignity", title="x", description="y")
        with pytest.raises(DuplicateKey):
            register(builtin_catalog(), entry)

    @pytest.mark.parametrize("key", ["", "Not-Kebab", "has_underscore", "-leading", "trailing-", "a--b"])
    def test_invalid_keys_rejected(self, key):
        with pytest.raises(InvalidKey):
            register(builtin_catalog(), RightEntry(key=key, title="x", description="y"))

    def test_empty_title_rejected(self):
        with pytest.raises(InvalidKey):
            register(builtin_catalog(), RightEntry(key="valid-key", title="", description="y"))

    def test_lookup_returns_registered_entry_verbatim(self):
        entry = _custom_entry()
        catalog = register(builtin_catalog(), entry)
        assert catalog.lookup(entry.key) == entry

    def test_registered_entries_are_not_builtin(self):
        forged = RightEntry(key="forged-builtin", title="x", description="y", builtin=True)
        catalog = register(builtin_catalog(), forged)
        assert not catalog.lookup("forged-builtin").builtin

    def test_registration_does_not_mutate_original(self):
        original = builtin_catalog()
        register(original, _custom_entry())
        assert len(original.entries) == 9

    def test_unknown_lookup_raises(self):
        with pytest.raises(UnknownRight):
            builtin_catalog().lookup("no-such-right")

    def test_contains(self):
        catalog = register(builtin_catalog(), _custom_entry())
        assert "freedom-of-thought-child" in catalog
        assert "missing" not in catalog


class TestSerialization:
    def test_round_trip_preserves_custom_entries(self):
        catalog = register(builtin_catalog(), _custom_entry())
        rebuilt = catalog_from_dict(catalog.to_dict())
        assert rebuilt.keys() == catalog.keys()
        assert rebuilt.lookup("freedom-of-thought-child") == _custom_entry()

    def test_builtins_rebuilt_from_engine_constants(self):
        data = builtin_catalog().to_dict()
        data["entries"][0]["title"] = "tampered"
        rebuilt = catalog_from_dict(data)
        assert rebuilt.lookup("human-dignity").title == "Respect for human dignity"
