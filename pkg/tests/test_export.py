import numpy as np
import pytest

from export.plots import plot_fig1_svg
from export.tables import (
    EVENT_COLUMNS,
    EventFileHeader,
    fmt,
    read_events_csv,
    read_fig1_csv,
    write_events_csv,
    write_fig1_csv,
)
from physics.errors import ConfigError
from physics.kinematics import CausalClass
from physics.montecarlo import STREAM_RULE, EventRecord
from physics.tagging import fig1_curves

HASH = "ab" * 32


@pytest.fixture
def curves(fig_ctx):
    return fig1_curves("pipi", 3.0, 100.0, np.linspace(0.0, 3.0, 31), fig_ctx)


class TestFig1Table:
    def test_values_read_back_exactly(self, curves, tmp_path):
        path = write_fig1_csv(curves, tmp_path / "out" / "fig1.csv")
        rows = read_fig1_csv(path)
        assert rows == curves.rows()
        assert path.read_text(encoding="utf-8").splitlines()[0] == "t1,interference,decoherence,total_width"

    def test_first_and_last_rows(self, curves, tmp_path):
        lines = write_fig1_csv(curves, tmp_path / "fig1.csv").read_text(encoding="utf-8").splitlines()
        assert lines[1] == "0,1,1,1"
        assert lines[-1].split(",")[:2] == ["3", "0"]

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            read_fig1_csv(path)

    def test_seventeen_digits(self):
        assert float(fmt(0.1 + 0.2)) == 0.1 + 0.2
        assert fmt(1.0) == "1"


class TestEventFile:
    def test_write_then_read(self, tmp_path):
        events = [
            EventRecord(f1="pipi", f2="generic", t1=0.1 + 0.2, t2=1.0 / 3.0, causal_class=CausalClass.TIME_LIKE),
            EventRecord(f1="generic", f2="generic", t1=2.0, t2=2.0),
        ]
        header = EventFileHeader(config_sha256=HASH, seed=7, partitions=2)
        path = write_events_csv(events, header, tmp_path / "events.csv")

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == f"# config_sha256={HASH} seed=7 partitions=2 rng={STREAM_RULE}"
        assert lines[1] == ",".join(EVENT_COLUMNS)
        assert lines[3].endswith(",unclassified")

        read_header, read_events = read_events_csv(path)
        assert read_header == header
        assert read_events == events

    def test_same_events_same_bytes(self, tmp_path):
        events = [EventRecord(f1="a", f2="b", t1=0.5, t2=0.75)]
        header = EventFileHeader(config_sha256=HASH, seed=1, partitions=1)
        first = write_events_csv(events, header, tmp_path / "one.csv").read_bytes()
        second = write_events_csv(events, header, tmp_path / "two.csv").read_bytes()
        assert first == second

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "events.csv"
        path.write_text("f1,f2,t1,t2,causal_class\n", encoding="utf-8")
        with pytest.raises(ConfigError) as info:
            read_events_csv(path)
        assert info.value.line == 1

    def test_bad_record_names_its_line(self, tmp_path):
        header = EventFileHeader(config_sha256=HASH, seed=1, partitions=1)
        path = tmp_path / "events.csv"
        path.write_text(
            f"{header.line()}\n{','.join(EVENT_COLUMNS)}\na,b,0.1,0.2,time_like\na,b,0.5,0.2,time_like\n",
            encoding="utf-8",
        )
        with pytest.raises(ConfigError) as info:
            read_events_csv(path)
        assert info.value.line == 4


class TestFigure:
    def test_svg_written(self, curves, tmp_path):
        path = plot_fig1_svg(curves, tmp_path / "plots" / "fig1.svg")
        text = path.read_text(encoding="utf-8")
        assert text.lstrip().startswith("<?xml")
        assert "<svg" in text

    def test_svg_is_reproducible(self, curves, tmp_path):
        first = plot_fig1_svg(curves, tmp_path / "a.svg").read_bytes()
        second = plot_fig1_svg(curves, tmp_path / "b.svg").read_bytes()
        assert first == second
