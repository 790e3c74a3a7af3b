import json

import numpy as np
import pytest

from compatpair.actions import BlockSymbol
from compatpair.cli import corpus_dir, main
from compatpair.errors import StructureError
from compatpair.groups import gaussian_bump, real_line
from compatpair.symbols import GaussianTermSymbol, PhaseGrid, PhaseSymbol
from compatpair import symio, weyl
from conftest import random_gaussian_term


class TestContainers:
    def test_phase_symbol_roundtrip(self, tmp_path, grid64, rng):
        a = random_gaussian_term(rng).render(grid64)
        p = tmp_path / "a.sym"
        symio.write_symbol(p, a)
        back = symio.read_symbol(p)
        assert back.grid == a.grid
        assert a.distance(back) == 0.0

    def test_block_symbol_roundtrip(self, tmp_path, grid64, rng):
        blocks = tuple(random_gaussian_term(rng).render(grid64) for _ in range(4))
        A = BlockSymbol("mat2", blocks)
        p = tmp_path / "b.sym"
        symio.write_symbol(p, A)
        back = symio.read_symbol(p)
        assert back.layout == "mat2"
        assert A.distance(back) == 0.0

    def test_group_function_roundtrip(self, tmp_path):
        a = gaussian_bump(real_line(), (0.1,), (0.5,), n=64)
        p = tmp_path / "g.sym"
        symio.write_symbol(p, a)
        back = symio.read_symbol(p)
        assert np.allclose(back.samples, a.samples)
        assert np.allclose(back.axes[0], a.axes[0])

    def test_matrix_roundtrip(self, tmp_path, grid64, rng):
        a = random_gaussian_term(rng).render(grid64)
        m = weyl.weyl_op(a, "hermite", 16)
        p = tmp_path / "m.mat"
        symio.write_matrix(p, m)
        back = symio.read_matrix(p)
        assert back.basis == ("hermite", 16)
        assert np.array_equal(back.entries, m.entries)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "junk.sym"
        p.write_bytes(b"not a container")
        with pytest.raises(StructureError):
            symio.read_symbol(p)

    def test_truncated_payload(self, tmp_path, grid64):
        a = PhaseSymbol.zero(grid64)
        p = tmp_path / "a.sym"
        symio.write_symbol(p, a)
        data = p.read_bytes()
        p.write_bytes(data[:-64])
        with pytest.raises(StructureError):
            symio.read_symbol(p)


class TestCli:
    def corpus(self, name):
        return str(corpus_dir() / name)

    def test_verify_pass_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        assert main(["verify", self.corpus("s1.cp"), "-o", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert payload["timing"] is None
        ids = [c["check_id"] for c in payload["checks"]]
        assert ids == sorted(ids)

    def test_verify_control_exit_one_names_check(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        rc = main(["verify", self.corpus("controls/s9_control.cp"), "-o", str(out)])
        assert rc == 1
        err = capsys.readouterr().err
        assert "relations" in err
        payload = json.loads(out.read_text())
        failing = [c["check_id"] for c in payload["checks"] if not c["passed"]]
        assert "relations" in failing

    def test_verify_broken_file_exit_two(self, tmp_path, capsys):
        p = tmp_path / "broken.cp"
        p.write_text("[scenario\nname = x\n")
        assert main(["verify", str(p)]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_verify_validation_error_exit_two(self, tmp_path, capsys):
        p = tmp_path / "bad.cp"
        p.write_text("[scenario]\nname = x\n[action]\nkind = b4\n"
                     "alpha = 0.5\nbeta = 0.5\ngamma = 0.25\n")
        assert main(["verify", str(p)]) == 2
        assert "gamma + 1/2" in capsys.readouterr().err

    def test_missing_file_exit_two(self, capsys):
        assert main(["verify", "/nonexistent/file.cp"]) == 2

    def test_guard_maps_to_exit_three(self, tmp_path, capsys):
        grid = PhaseGrid(64, 4.0)
        flat = PhaseSymbol(grid, np.ones((64, 64)))
        p = tmp_path / "flat.sym"
        symio.write_symbol(p, flat)
        rc = main(["star", str(p), str(p), "-o", str(tmp_path / "o.sym")])
        assert rc == 3
        assert "guard" in capsys.readouterr().err

    def test_shipped_projector_symbol(self, tmp_path):
        shipped = self.corpus("a00.sym")
        out = tmp_path / "c.sym"
        assert main(["star", shipped, shipped, "-o", str(out)]) == 0
        a00 = symio.read_symbol(shipped)
        assert a00.distance(symio.read_symbol(out)) < 1e-6

    def test_star_and_op_commands(self, tmp_path):
        grid = PhaseGrid(64, 4.0)
        a00 = GaussianTermSymbol.standard().render(grid)
        pa = tmp_path / "a.sym"
        symio.write_symbol(pa, a00)
        pc = tmp_path / "c.sym"
        assert main(["star", str(pa), str(pa), "-o", str(pc)]) == 0
        c = symio.read_symbol(pc)
        assert a00.distance(c) < 1e-6
        pm = tmp_path / "a.mat"
        assert main(["op", str(pa), "--hermite", "16", "-o", str(pm)]) == 0
        ev = np.linalg.eigvalsh(symio.read_matrix(pm).entries)
        assert abs(ev[-1] - 1.0) < 1e-8

    def test_op_spectrum_dump(self, tmp_path):
        shipped = self.corpus("a00.sym")
        out = tmp_path / "a.mat"
        csv = tmp_path / "a.csv"
        assert main(["op", shipped, "--hermite", "16", "-o", str(out),
                     "--spectrum", str(csv)]) == 0
        lines = csv.read_text().strip().splitlines()
        assert lines[0] == "index,singular_value"
        assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-8)

    def test_op_zero_symbol(self, tmp_path, grid64):
        p = tmp_path / "z.sym"
        symio.write_symbol(p, PhaseSymbol.zero(grid64))
        pm = tmp_path / "z.mat"
        assert main(["op", str(p), "--hermite", "16", "-o", str(pm)]) == 0
        assert symio.read_matrix(pm).norm() == 0.0

    def test_grid_mismatch_exit_two(self, tmp_path):
        a = GaussianTermSymbol.standard().render(PhaseGrid(64, 4.0))
        b = GaussianTermSymbol.standard().render(PhaseGrid(128, 4.0))
        pa, pb = tmp_path / "a.sym", tmp_path / "b.sym"
        symio.write_symbol(pa, a)
        symio.write_symbol(pb, b)
        assert main(["star", str(pa), str(pb), "-o", str(tmp_path / "c.sym")]) == 2

    def test_rep_command(self, tmp_path):
        out = tmp_path / "rep.mat"
        assert main(["rep", self.corpus("s1.cp"), "-o", str(out)]) == 0
        mats = symio.read_named_matrices(out)
        rng = np.random.default_rng(7)
        lam = rng.uniform(-1.5, 1.5, (50, 2))
        assert np.max(np.abs(mats["x1"].entries - np.diag(lam[:, 0]))) < 1e-10

    def test_list_catalogue(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for k in ("s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9"):
            assert k in out
        assert out.count(".cp") >= 21

    def test_report_determinism(self, tmp_path):
        o1, o2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["verify", self.corpus("s9.cp"), "-o", str(o1)]) == 0
        assert main(["verify", self.corpus("s9.cp"), "-o", str(o2)]) == 0
        assert o1.read_bytes() == o2.read_bytes()

    def test_csv_format(self, tmp_path):
        out = tmp_path / "r.csv"
        assert main(["verify", self.corpus("s1.cp"), "--format", "csv",
                     "-o", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("check_id,kind,residual")
        assert len(lines) > 5

    def test_tol_scale_override(self, tmp_path, capsys):
        rc = main(["verify", self.corpus("s1.cp"), "--tol", "1e-20",
                   "-o", str(tmp_path / "r.json")])
        assert rc == 1

    def test_seed_override_changes_report(self, tmp_path):
        o1, o2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["verify", self.corpus("s1.cp"), "-o", str(o1)])
        main(["verify", self.corpus("s1.cp"), "--seed", "99", "-o", str(o2)])
        assert o1.read_bytes() != o2.read_bytes()
