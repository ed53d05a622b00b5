import pytest

from mll.dataset import parse_csv
from mll.diabetes import LABEL_NAMES, PreprocessReport, preprocess_diabetes
from mll.errors import PreprocessError

HEADER = (
    "encounter_id,patient_nbr,race,gender,age,weight,payer_code,"
    "medical_specialty,time_in_hospital,readmitted"
)


def make_raw(rows):
    text = HEADER + "\n" + "\n".join(rows) + "\n"
    return parse_csv(text.encode(), (), missing_marker="?", name="mini")


def test_single_row_binarization():
    raw = make_raw(["1,100,Caucasian,Male,[50-60),?,MC,Surgery,3,NO"])
    out, report = preprocess_diabetes(raw)
    assert out.schema.label_names == LABEL_NAMES
    assert out.label_matrix().tolist() == [[1, 0, 0, 0, 0, 1, 0]]
    assert report.rows_out == 1


def test_missing_race_row_dropped():
    raw = make_raw([
        "1,100,?,Female,[50-60),?,MC,Surgery,3,NO",
        "2,101,Asian,Female,[60-70),?,MC,Surgery,5,YES",
    ])
    out, report = preprocess_diabetes(raw)
    assert report.rows_in == 2
    assert report.rows_dropped_missing_race == 1
    assert report.rows_out == 1
    assert out.label_matrix().tolist() == [[0, 0, 0, 1, 0, 0, 1]]


def test_invalid_gender_row_dropped():
    raw = make_raw([
        "1,100,Hispanic,Unknown/Invalid,[50-60),?,MC,Surgery,3,NO",
        "2,101,Other,Male,[60-70),?,MC,Surgery,5,YES",
    ])
    out, report = preprocess_diabetes(raw)
    assert report.rows_dropped_invalid_gender == 1
    assert report.rows_out == 1
    assert out.label_matrix().tolist() == [[0, 0, 0, 0, 1, 1, 0]]


def test_columns_dropped_and_imputed():
    raw = make_raw([
        "1,100,Caucasian,Male,[50-60),?,MC,?,3,NO",
        "2,101,Caucasian,Female,[60-70),180,?,Surgery,5,YES",
    ])
    out, report = preprocess_diabetes(raw)
    names = {a.name for a in out.schema.attributes}
    for gone in ("weight", "payer_code", "encounter_id", "patient_nbr", "race", "gender"):
        assert gone not in names
    assert "medical_specialty" in names
    assert report.columns_imputed == ("medical_specialty",)
    dropped = {name: (reason, frac) for name, reason, frac in report.columns_dropped}
    assert dropped["weight"][0] == "high_missing"
    assert dropped["weight"][1] == 0.5
    assert dropped["encounter_id"][0] == "identifier"
    # the missing specialty cell became the explicit category
    j = out.schema.index_of("medical_specialty")
    assert out.decode(0, j) == "missing"
    assert out.decode(1, j) == "Surgery"


def test_age_stays_nominal():
    raw = make_raw([
        "1,100,Caucasian,Male,[50-60),?,MC,Surgery,3,NO",
        "2,101,Caucasian,Female,[60-70),?,MC,Surgery,5,YES",
    ])
    out, _ = preprocess_diabetes(raw)
    age = out.schema.attributes[out.schema.index_of("age")]
    assert age.is_nominal


def test_one_race_one_gender_invariant():
    rows = []
    races = ["Caucasian", "AfricanAmerican", "Hispanic", "Asian", "Other"]
    for i in range(20):
        rows.append(f"{i},{i},{races[i % 5]},{'Male' if i % 2 else 'Female'},[50-60),?,MC,Surgery,{i},NO")
    out, _ = preprocess_diabetes(make_raw(rows))
    labels = out.label_matrix()
    assert (labels[:, :5].sum(axis=1) == 1).all()
    assert (labels[:, 5:].sum(axis=1) == 1).all()
    assert (labels.sum(axis=1) == 2).all()


def test_required_column_missing():
    text = "race,gender\nCaucasian,Male\n"
    raw = parse_csv(text.encode(), ())
    with pytest.raises(PreprocessError, match="weight"):
        preprocess_diabetes(raw)


def test_unexpected_race_value():
    raw = make_raw(["1,100,Martian,Male,[50-60),?,MC,Surgery,3,NO"])
    with pytest.raises(PreprocessError, match="Martian"):
        preprocess_diabetes(raw)


def test_report_arithmetic_enforced():
    with pytest.raises(PreprocessError):
        PreprocessReport(10, 1, 1, 9, (), ())


def test_report_text_format():
    report = PreprocessReport(10, 1, 1, 8, (("weight", "high_missing", 0.5),), ("medical_specialty",))
    text = report.as_text()
    assert "rows_in=10" in text
    assert "rows_out=8" in text
    assert "weight:high_missing:0.500000" in text
    assert "reference_rows_out=98054" in text
    assert all("=" in line for line in text.strip().splitlines())


def test_rerun_is_deterministic():
    raw = make_raw([
        "1,100,Caucasian,Male,[50-60),?,MC,?,3,NO",
        "2,101,Asian,Female,[60-70),180,?,Surgery,5,YES",
    ])
    out1, rep1 = preprocess_diabetes(raw)
    out2, rep2 = preprocess_diabetes(raw)
    assert out1.equals(out2)
    assert rep1 == rep2
