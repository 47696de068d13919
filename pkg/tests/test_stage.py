"""Tests for pipeline stages."""

import logging

from branchfloer.settings import Settings
from branchfloer.stage import Stage


class TestStage:
    def test_lazy_eval(self):
        call_count = 0
        settings = Settings(initial={"max_domain_coeff": 5})

        def fn():
            nonlocal call_count
            call_count += 1
            return settings.get("max_domain_coeff") * 2

        s = Stage(fn, "double")
        assert call_count == 0
        assert s.get() == 10
        assert call_count == 1

    def test_caches_until_dirty(self):
        call_count = 0
        settings = Settings(initial={"max_domain_coeff": 5})

        def fn():
            nonlocal call_count
            call_count += 1
            return settings.get("max_domain_coeff")

        s = Stage(fn)
        s.get()
        s.get()
        assert call_count == 1
        assert s.runs == 1

    def test_invalidation(self):
        settings = Settings(initial={"max_domain_coeff": 5})
        s = Stage(lambda: settings.get("max_domain_coeff") * 2)
        assert s.get() == 10
        settings.set("max_domain_coeff", 7)
        assert s.dirty
        assert s.get() == 14

    def test_equal_value_keeps_cache(self):
        settings = Settings(initial={"report": "json"})
        s = Stage(lambda: settings.get("report"))
        s.get()
        settings.set("report", "json")
        assert not s.dirty

    def test_dependency_tracking(self):
        settings = Settings(initial={"lift": True, "report": "text", "timing": False})
        s = Stage(lambda: settings.get("report") if settings.get("lift") else settings.get("timing"))
        assert s.get() == "text"

        settings.set("lift", False)
        assert s.get() is False
        # report is no longer read
        settings.set("report", "json")
        assert not s.dirty

    def test_chained_stages(self):
        settings = Settings(initial={"max_domain_coeff": 3})
        doubled = Stage(lambda: settings.get("max_domain_coeff") * 2)
        quadrupled = Stage(lambda: doubled.get() * 2)
        assert quadrupled.get() == 12
        settings.set("max_domain_coeff", 5)
        assert quadrupled.dirty
        assert quadrupled.get() == 20

    def test_unrelated_stage_untouched(self):
        settings = Settings()
        reads_lift = Stage(lambda: settings.get("lift"))
        reads_report = Stage(lambda: settings.get("report"))
        reads_lift.get()
        reads_report.get()
        settings.set("report", "json")
        assert not reads_lift.dirty
        assert reads_report.dirty

    def test_default_name(self):
        def answer():
            return 42

        s = Stage(answer)
        assert s.name == "answer"
        assert s.get() == 42

    def test_repr(self):
        s = Stage(lambda: 1, "one")
        assert repr(s) == "Stage(one, dirty)"
        s.get()
        assert repr(s) == "Stage(one, cached after 1 run(s))"

    def test_records_elapsed_time(self, caplog):
        s = Stage(lambda: sum(range(100)), "sum")
        assert s.elapsed is None
        with caplog.at_level(logging.DEBUG, logger="branchfloer.stage"):
            s.get()
        assert s.elapsed is not None and s.elapsed >= 0
        assert "Stage sum finished" in caplog.text
