import struct

import pytest

import vpi


def test_generate_episode_shape():
    ep = vpi.generate_episode("polygon", "group_by_color", seed=4)
    assert ep["label"] == "group_by_color"
    assert len(ep["scenes"]) == len(ep["ground_truth_residuals"]) + 1
    assert vpi.generate_episode("polygon", "group_by_color", seed=4) == ep


def test_render_png_header_and_size():
    ep = vpi.generate_episode("block", "align_horizontal", seed=1)
    png = vpi.render(ep, 0)
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    width, height = struct.unpack(">II", png[16:24])
    assert (width, height) == (512, 512)


def test_infer_oracle_and_mdpe_recover_label():
    ep = vpi.generate_episode("polygon", "group_by_shape", seed=2)
    covr = vpi.infer(ep, "covr", "oracle")
    assert covr["preference"] == "group_by_shape"
    assert vpi.sr_vrd(covr["residuals"], ep["ground_truth_residuals"]) == 1.0
    assert vpi.infer(ep, "mdpe")["preference"] == "group_by_shape"


def test_metrics():
    assert vpi.sr_prd(["group_by_color", None], ["group_by_color", "group_by_shape"]) == 0.5
    with pytest.raises(vpi.VpiError) as info:
        vpi.sr_prd([], [])
    assert info.value.kind == "EmptyInput"


def test_parse_vrd_response():
    text = (
        "geometric property: in_front_of\n"
        "semantic property: source object: apple, red, sphere,\n"
        "target object: orange drink, orange, cylinder\n"
        "description: Move the apple in front of the orange drink."
    )
    r = vpi.parse_vrd_response(text)
    assert r["geometric"] == "in_front_of"
    assert r["semantic"]["source"]["name"] == "apple"
    with pytest.raises(vpi.VpiError) as info:
        vpi.parse_vrd_response("nothing here")
    assert info.value.kind == "MalformedResponse"


def test_unknown_task_raises_invalid_argument():
    with pytest.raises(vpi.VpiError) as info:
        vpi.generate_episode("kitchen", "group_by_color", seed=0)
    assert info.value.kind == "InvalidArgument"


def test_benchmark_round_trip(tmp_path):
    config = "methods = mdpe, covr\ntasks = polygon\nrepeats = 2\nbackend = oracle\n"
    csv = vpi.run_benchmark(config)
    assert "group_by_color" in csv
    text = vpi.report_text(csv)
    assert "1.00" in text
