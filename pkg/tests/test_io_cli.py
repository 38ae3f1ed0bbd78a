import copy
import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from exactcat import io
from exactcat.categories import DualMod, FinVect, VectNodal, VectP1
from exactcat.cli import main, run
from exactcat.complexes import is_acyclic
from exactcat.linalg import QQ, Field
from exactcat.sampling import random_acyclic_complex, random_chain_map, random_complex

ROOT = Path(__file__).resolve().parent.parent
INST = ROOT / "instances"


def load(name):
    return json.loads((INST / name).read_text())


def write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_check_acyclic_euler():
    code, rep, _ = run(["check-acyclic", str(INST / "euler.json")])
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["acyclic"] is True
    K = rep["result"]["witness"]["K"]
    assert K["-1"] == {"twists": [-1]} and K["0"] == {"twists": [1]}


def test_check_acyclic_torsion():
    code, rep, _ = run(["check-acyclic", str(INST / "torsion.json")])
    assert code == 2 and rep["status"] == "domain-error"


def test_pic_nodal_cubic():
    code, rep, _ = run(["pic", str(INST / "nodal-cubic-f5.json"), "--degree", "0"])
    assert code == 0 and rep["result"]["count"] == 4


def test_pic_field_override():
    code, rep, _ = run(["pic", str(INST / "nodal-cubic-f5.json"), "--degree", "0", "--field", "7"])
    assert code == 0 and rep["result"]["count"] == 6


def test_heart_cover_periodic():
    code, rep, _ = run(["heart-cover", str(INST / "dualmod-periodic.json")])
    assert code == 2
    assert rep["obstruction"]["rank"] < rep["obstruction"]["augmented_rank"]


@pytest.mark.parametrize("name,cmd,extra", [
    ("finvect-4term.json", "heart-cover", []),
    ("nodal-fitting.json", "fitting", []),
    ("idempotent-f7.json", "split-idempotent", []),
    ("ext-nodal.json", "ext", []),
    ("sections-f5.json", "sections", []),
    ("euler.json", "truncate", ["--n", "-1"]),
])
def test_instances_succeed(name, cmd, extra):
    code, rep, _ = run([cmd, str(INST / name)] + extra)
    assert code == 0, rep


def test_ext_value():
    assert run(["ext", str(INST / "ext-nodal.json")])[1]["result"]["dim"] == 1


def test_missing_file(tmp_path):
    code, rep, _ = run(["check-acyclic", str(tmp_path / "nope.json")])
    assert code == 1 and rep["element"]


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    assert run(["check-acyclic", str(p)])[0] == 1


def test_wrong_version(tmp_path):
    doc = load("euler.json")
    doc["schema_version"] = "exactcat/0"
    code, rep, _ = run(["check-acyclic", write(tmp_path, doc)])
    assert code == 1 and rep["element"] == "schema_version"


def test_bad_scalar_named(tmp_path):
    doc = load("torsion.json")
    doc["payload"]["complexes"]["T"]["differentials"][0]["matrix"] = [[[9, 0]]]
    code, rep, _ = run(["check-acyclic", write(tmp_path, doc)])
    assert code == 1 and "T" in rep["element"]


def test_unresolved_name(tmp_path):
    doc = load("torsion.json")
    doc["request"]["args"]["complex"] = "missing"
    code, rep, _ = run(["check-acyclic", write(tmp_path, doc)])
    assert code == 1 and "missing" in rep["error"] + str(rep["element"])


def test_unsorted_twists(tmp_path):
    doc = load("torsion.json")
    doc["payload"]["complexes"]["T"]["objects"][0] = {"twists": [0, 1]}
    assert run(["check-acyclic", write(tmp_path, doc)])[0] == 1


def test_unknown_top_level_key(tmp_path):
    doc = load("euler.json")
    doc["extra"] = 1
    assert run(["check-acyclic", write(tmp_path, doc)])[0] == 1


def test_roundtrip_byte_identical(tmp_path):
    for name in sorted(p.name for p in INST.glob("*.json")):
        doc = load(name)
        cmd = doc["request"]["op"]
        code, rep, _ = run([cmd, str(INST / name)])
        again = run([cmd, write(tmp_path, rep["instance"], name)])
        assert again[0] == code
        assert io.dumps(again[1]) == io.dumps(rep)


def test_out_and_text(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["check-acyclic", str(INST / "euler.json"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "ok"
    assert main(["check-acyclic", str(INST / "euler.json"), "--format", "text"]) == 0
    assert "acyclic" in capsys.readouterr().out


def test_oracle_command():
    code, rep, _ = run(["oracle", "degree-monotonicity", "7"])
    assert code == 0 and rep["result"]["status"] == "pass"
    assert io.dumps(rep) == io.dumps(run(["oracle", "degree-monotonicity", "7"])[1])
    assert run(["oracle", "no-such-suite", "1"])[0] == 1


def test_oracle_fitting_functoriality_42():
    code, rep, _ = run(["oracle", "fitting-functoriality", "42"])
    assert code == 0 and rep["result"]["cases"] == 200


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "exactcat.cli", "check-acyclic", str(INST / "euler.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "ok"


@pytest.mark.parametrize("B", [FinVect(Field(7)), DualMod(Field(3)), VectP1(Field(7)), VectNodal(Field(5))])
def test_encode_parse_roundtrip(B):
    rng = random.Random(11)
    for _ in range(15):
        c = random_acyclic_complex(B, rng, max_rank=3) if rng.random() < 0.5 else random_complex(B, rng)
        f = random_chain_map(c, c, rng)
        doc = io.make_document(B, "fitting", {"map": "f"}, complexes={"C": c}, chain_maps={"f": f})
        parsed = io.parse_document(json.loads(io.dumps(doc)))
        assert parsed.complex("C") == c
        g = parsed.chain_map("f")
        assert all(g[i] == f[i] for i in c.degrees)


def test_rational_scalars():
    B = FinVect(QQ)
    doc = {"schema_version": io.SCHEMA_VERSION, "backend": {"name": "finvect", "field": "rational"},
           "payload": {"morphisms": {"f": {"source": {"dim": 1}, "target": {"dim": 2},
                                           "matrix": [["1/2"], ["-3"]]}}},
           "request": {"op": "fitting", "args": {}}}
    d = io.parse_document(doc)
    f = d.morphism("f")
    assert f.backend == B
    assert io.encode_morphism(f)["matrix"] == [["1/2"], ["-3/1"]]
    bad = copy.deepcopy(doc)
    bad["payload"]["morphisms"]["f"]["matrix"] = [["x"], ["1"]]
    with pytest.raises(io.InstanceError):
        io.parse_document(bad).morphism("f")


def test_schema_validates_instances():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(Path(io.SCHEMA_PATH).read_text())
    for p in INST.glob("*.json"):
        jsonschema.validate(json.loads(p.read_text()), schema)
    c = random_acyclic_complex(VectNodal(Field(5)), random.Random(2))
    assert is_acyclic(c)
    jsonschema.validate(io.make_document(c.backend, "check-acyclic", {"complex": "T"}, complexes={"T": c}), schema)
