"""Smoke test for the Python bindings. Run after `maturin develop` in crates/py."""

import json

import ainf


def main():
    assert set(ainf.corpus()) >= {"s2", "s3", "heisenberg", "hopf", "cp2"}
    assert "transfer" in ainf.command_names()

    heis = ainf.Model.corpus("heisenberg")
    assert heis.grading == "cohomological"
    t = ainf.transfer(heis, 6)
    assert t.betti[:4] == [0, 2, 2, 1]
    assert t.defects() == 0
    x3, rep, indet, inside = t.massey("e1", "e2", "e2")
    assert inside, (x3, rep, indet)
    assert x3 == "[e23]"

    s3 = ainf.Model.corpus("s3")
    report = ainf.run("loop-space", s3, 8)
    assert report.passed
    assert report.betti["B̃(H)"] == [1, 0, 1, 0, 1, 0, 1, 0, 1]
    assert json.loads(report.json())["command"] == "loop-space"

    fiber = ainf.run("fiber", ainf.Model.corpus("hopf"), 6)
    assert fiber.passed
    assert fiber.betti["K⊗_φD"][:4] == [1, 0, 0, 1]

    again = ainf.Model.load(heis.emit())
    assert again.name == heis.name

    try:
        ainf.run("fiber", s3, 4)
    except ainf.AinfError as e:
        assert "fiber" in str(e)
    else:
        raise AssertionError("fiber on s3 should fail")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
