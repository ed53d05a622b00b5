import numpy as np
import pytest

from mll.dataset import (
    Attribute,
    AttributeSchema,
    MultiLabelDataset,
    parse_csv,
    sample,
    split,
)
from mll.errors import ConfigError, ParseError

from conftest import make_dataset


class TestParseCsv:
    def test_basic_label_setup(self):
        text = b"age,Male,Female\n30,1,0\n40,0,1\n50,1,0\n"
        ds = parse_csv(text, ["Male", "Female"])
        assert ds.k == 2
        assert ds.n_instances == 3
        assert ds.schema.label_names == ("Male", "Female")
        assert ds.label_matrix().tolist() == [[1, 0], [0, 1], [1, 0]]

    def test_numeric_inference_with_missing(self):
        text = b"x,L\n1.5,0\n2,1\n?,0\n"
        ds = parse_csv(text, ["L"])
        attr = ds.schema.attributes[0]
        assert not attr.is_nominal
        assert np.isnan(ds.values[2, 0])

    def test_mixed_column_goes_nominal(self):
        text = b"x,L\n1.5,0\nabc,1\n2,0\n"
        ds = parse_csv(text, ["L"])
        attr = ds.schema.attributes[0]
        assert attr.is_nominal
        assert attr.categories == ("1.5", "2", "abc")  # sorted

    def test_nonbinary_label_rejected(self):
        text = b"x,L\n1,0\n2,2\n"
        with pytest.raises(ConfigError):
            parse_csv(text, ["L"])

    def test_missing_label_cell_rejected(self):
        text = b"x,L\n1,0\n2,?\n"
        with pytest.raises(ConfigError):
            parse_csv(text, ["L"])

    def test_unknown_label_name(self):
        with pytest.raises(ConfigError):
            parse_csv(b"x,y\n1,2\n", ["nope"])

    def test_ragged_row_reports_number(self):
        with pytest.raises(ParseError, match="row 3"):
            parse_csv(b"x,y\n1,2\n1\n", [])

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_csv(b"", [])


class TestSchemaValidation:
    def test_duplicate_attribute_names(self):
        with pytest.raises(ConfigError):
            AttributeSchema((Attribute("a"), Attribute("a")), ())

    def test_label_must_be_binary_nominal(self):
        with pytest.raises(ConfigError):
            AttributeSchema((Attribute("a"),), (0,))

    def test_label_index_range(self):
        with pytest.raises(ConfigError):
            AttributeSchema((Attribute("a"),), (3,))

    def test_missing_label_cell_rejected_at_construction(self):
        schema = AttributeSchema((Attribute("L", ("0", "1")),), (0,))
        with pytest.raises(ConfigError):
            MultiLabelDataset(schema, np.array([[np.nan]]))

    def test_values_are_frozen(self):
        ds = make_dataset(n=10)
        with pytest.raises(ValueError):
            ds.values[0, 0] = 5.0


class TestSample:
    def test_first_identity(self):
        ds = make_dataset(n=20)
        assert sample(ds, 20, "first").equals(ds)

    def test_first_prefix_composes(self):
        ds = make_dataset(n=50)
        once = sample(ds, 30, "first")
        twice = sample(once, 10, "first")
        assert twice.equals(sample(ds, 10, "first"))

    def test_random_is_deterministic(self):
        ds = make_dataset(n=50)
        a = sample(ds, 20, "random", seed=9)
        b = sample(ds, 20, "random", seed=9)
        assert a.equals(b)
        assert (a.row_ids == b.row_ids).all()

    def test_random_draws_without_replacement(self):
        ds = make_dataset(n=50)
        s = sample(ds, 50, "random", seed=3)
        assert sorted(s.row_ids.tolist()) == list(range(50))

    def test_out_of_range(self):
        ds = make_dataset(n=5)
        with pytest.raises(ValueError):
            sample(ds, 6)
        with pytest.raises(ValueError):
            sample(ds, 0)


class TestSplit:
    def test_ceiling_arithmetic(self):
        ds = make_dataset(n=10)
        train, test = split(ds, 0.66, seed=1)
        assert train.n_instances == 7
        assert test.n_instances == 3

    def test_tiny_even_split(self):
        ds = make_dataset(n=2)
        train, test = split(ds, 0.5, seed=1)
        assert train.n_instances == 1
        assert test.n_instances == 1

    def test_determinism(self):
        ds = make_dataset(n=30)
        a = split(ds, 0.66, seed=4)
        b = split(ds, 0.66, seed=4)
        assert a[0].equals(b[0]) and a[1].equals(b[1])

    def test_partition_by_row_identity(self):
        ds = make_dataset(n=37)
        train, test = split(ds, 0.7, seed=2)
        combined = sorted(train.row_ids.tolist() + test.row_ids.tolist())
        assert combined == sorted(ds.row_ids.tolist())

    def test_degenerate_fraction(self):
        ds = make_dataset(n=10)
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                split(ds, bad, seed=1)
