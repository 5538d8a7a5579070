import pytest

from main import main
from src.graph.formatter import load_graph
from src.tools.file_tools import read_file
from src.utils.errors import InputError


def test_undecodable_bytes_are_an_input_error(tmp_path):
    garbage = tmp_path / "garbage.json"
    garbage.write_bytes(b"\xff\xfe\x00garbage")
    with pytest.raises(InputError) as excinfo:
        load_graph(garbage)
    assert str(excinfo.value).startswith("graph_core: cannot parse")
    assert excinfo.value.exit_code == 2


def test_latin1_document_still_loads(tmp_path):
    document = tmp_path / "latin1.json"
    text = '{"vertices": [{"id": 0, "label": "café"}, {"id": 1}], "edges": [{"u": 0, "v": 1, "b": 1.0}]}'
    document.write_bytes(text.encode("latin1"))
    graph = load_graph(document)
    assert graph.size == 2
    assert graph.labels[0] == "café"


def test_directory_path_is_an_input_error(tmp_path):
    with pytest.raises(InputError) as excinfo:
        load_graph(tmp_path)
    assert str(excinfo.value).startswith("graph_core: cannot read file")


def test_missing_file_is_an_input_error(tmp_path):
    with pytest.raises(InputError) as excinfo:
        load_graph(tmp_path / "missing.json")
    assert "file not found" in str(excinfo.value)


def test_read_file_tags_the_calling_module(tmp_path):
    with pytest.raises(InputError) as excinfo:
        read_file(tmp_path / "missing.txt")
    assert excinfo.value.module == "cli"


def test_undecodable_input_exits_with_two(tmp_path, capsys):
    garbage = tmp_path / "garbage.json"
    garbage.write_bytes(b"\xff\xfe\x00garbage")
    assert main(["metric", "--input", str(garbage)]) == 2
    assert main(["cheeger", "--input", str(tmp_path)]) == 2
    assert "cannot parse" in capsys.readouterr().err
