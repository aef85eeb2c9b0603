import math

from dilatk.plotting import plot_orbit_profile, plot_report, plot_suite
from dilatk.report import VerificationReport
from dilatk.wold import OrbitProfile


def test_figures_are_written(tmp_path):
    rep = VerificationReport("demo")
    rep.passed("a")
    rep.fail("b", 1)
    rep.count("points", 10)
    for name, draw in (("r.png", lambda p: plot_report(rep, p)),
                       ("o.png", lambda p: plot_orbit_profile(OrbitProfile({1: math.inf, 3: 2}, 1, 0), p)),
                       ("s.svg", lambda p: plot_suite([("x", 10, 0, 0.5), ("y", 4, 1, 0.1)], p))):
        path = tmp_path / name
        draw(str(path))
        assert path.stat().st_size > 0
