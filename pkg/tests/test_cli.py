"""CLI parsing, command output, exit codes, and serialization round-trips."""

import json

import pytest

from horofan.cli import InputDocument, ParseError, execute, main, parse_input, serialize

CLASS_GROUP_DOC = json.dumps(
    {
        "group": "A2",
        "torus_rank": 0,
        "I": [],
        "M": [[1, 0], [0, 1]],
        "fan": [
            {"generators": [[1, 1], [1, -1]], "colours": ["a1"]},
            {"generators": [[-1, 0], [1, 1]], "colours": []},
            {"generators": [[-1, 0], [1, -1]], "colours": []},
            {"generators": [[1, 1]], "colours": []},
            {"generators": [[1, -1]], "colours": []},
            {"generators": [[-1, 0]], "colours": []},
        ],
        "divisors": {
            "delta": {"rays": {"-1,0": 1}, "colours": {"a2": 2}},
            "flat": {"rays": {"-1,0": 1}, "colours": {"a2": 1}},
            "bad": {"rays": {"1,1": 1}},
        },
    }
)

ORBITS_DOC = json.dumps(
    {
        "group": "A2",
        "M": [[1, 0], [0, 1]],
        "fan": [
            {"generators": [[1, 0], [0, 1]], "colours": ["a1"]},
            {"generators": [[0, 1], [-1, -1]], "colours": []},
            {"generators": [[1, 0], [-1, -1]], "colours": ["a1"]},
            {"generators": [[1, 0]], "colours": ["a1"]},
            {"generators": [[0, 1]], "colours": []},
            {"generators": [[-1, -1]], "colours": []},
        ],
    }
)


def json_block(text: str) -> dict:
    _, _, tail = text.partition("---JSON---\n")
    return json.loads(tail)


class TestParseInput:
    def test_well_formed_document(self):
        doc = parse_input(CLASS_GROUP_DOC)
        assert doc.fan.lattice.rank == 2
        assert len(doc.fan.cones) == 7  # six listed plus the implied trivial cone
        assert set(doc.divisors) == {"delta", "flat", "bad"}

    def test_unknown_colour_label(self):
        bad = json.dumps({"group": "A2", "M": [[1, 0]], "fan": [{"generators": [[1]], "colours": ["a3"]}]})
        with pytest.raises(ParseError, match="a3"):
            parse_input(bad)

    def test_empty_fan_is_trivial_fan(self):
        doc = parse_input(json.dumps({"group": "A2", "M": [[1, 0], [0, 1]], "fan": []}))
        assert len(doc.fan.cones) == 1
        assert doc.fan.cones[0].dim() == 0

    def test_unknown_top_level_key(self):
        with pytest.raises(ParseError, match="unknown keys"):
            parse_input(json.dumps({"group": "A1", "M": [[1]], "fans": []}))

    def test_unknown_cone_key(self):
        with pytest.raises(ParseError, match="unknown keys"):
            parse_input(
                json.dumps({"group": "A1", "M": [[1]], "fan": [{"rays": [[1]]}]})
            )

    def test_invalid_datum_is_parse_error(self):
        with pytest.raises(ParseError, match="pairs nonzero"):
            parse_input(json.dumps({"group": "A2", "I": ["a1"], "M": [[1, 0]], "fan": []}))

    def test_malformed_json_reports_position(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_input("{not json")

    def test_wrong_vector_length(self):
        with pytest.raises(ParseError, match="expected 2 entries"):
            parse_input(json.dumps({"group": "A2", "M": [[1]], "fan": []}))

    def test_bad_divisor_ray(self):
        with pytest.raises(ParseError, match="not a non-coloured ray"):
            parse_input(
                json.dumps(
                    {
                        "group": "A1",
                        "M": [[1]],
                        "fan": [{"generators": [[1]], "colours": []}],
                        "divisors": {"d": {"rays": {"7,7": 1}}},
                    }
                )
            )

    def test_round_trip_idempotent(self):
        once = serialize(parse_input(CLASS_GROUP_DOC))
        twice = serialize(parse_input(once))
        assert once == twice


class TestCommands:
    def test_class_group(self):
        doc = parse_input(CLASS_GROUP_DOC)
        code, text = execute("class-group", doc)
        assert code == 0
        payload = json_block(text)
        assert payload["class_group"]["name"] == "Z^3"
        assert payload["left_exact"] is True
        assert "Cl(X) = Z^3" in text

    def test_orbits_table(self):
        doc = parse_input(ORBITS_DOC)
        code, text = execute("orbits", doc)
        assert code == 0
        payload = json_block(text)
        dims = sorted(row["dimension"] for row in payload["orbits"])
        assert dims == [2, 2, 3, 3, 4, 4, 5]
        closed = {row["dimension"] for row in payload["orbits"] if row["closed"]}
        assert closed == {2, 3}
        for row in payload["orbits"]:
            assert row["cone"] in row["closure_contains"]

    def test_validate_valid(self):
        doc = parse_input(ORBITS_DOC)
        code, text = execute("validate", doc)
        assert code == 0
        assert json_block(text)["valid"] is True

    def test_validate_missing_face_exit_one(self):
        bad = json.dumps(
            {
                "group": "A2",
                "M": [[1, 0], [0, 1]],
                "fan": [{"generators": [[1, 0], [0, 1]], "colours": ["a1"]}],
            }
        )
        doc = parse_input(bad)
        code, text = execute("validate", doc)
        assert code == 1
        payload = json_block(text)
        assert payload["valid"] is False
        assert any("missing" in v for v in payload["violations"])

    def test_other_commands_reject_invalid_fan(self):
        bad = json.dumps(
            {
                "group": "A2",
                "M": [[1, 0], [0, 1]],
                "fan": [{"generators": [[1, 0], [0, 1]], "colours": ["a1"]}],
            }
        )
        doc = parse_input(bad)
        code, _ = execute("class-group", doc)
        assert code == 1

    def test_classify(self):
        doc = parse_input(ORBITS_DOC)
        code, text = execute("classify", doc)
        payload = json_block(text)
        assert code == 0
        assert payload["complete"] and payload["projective"] and payload["smooth"]
        assert not payload["affine"]

    def test_picard(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, text = execute("picard", doc)
        payload = json_block(text)
        assert payload["picard"]["name"] == "Z^2"
        assert payload["plf_mod_lf"]["name"] == "Z"
        assert payload["report"]["rank_consistent"] is True

    def test_cartier(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, text = execute("cartier", doc, divisor="delta")
        payload = json_block(text)
        assert payload["cartier"] is True
        assert sorted(payload["data"].values()) == [[-1, -1], [-1, 1], [0, 0]]

    def test_not_cartier(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, text = execute("cartier", doc, divisor="bad")
        assert json_block(text)["cartier"] is False

    def test_positivity(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, ample_text = execute("positivity", doc, divisor="delta")
        assert json_block(ample_text) == {
            "cartier": True,
            "basepoint_free": True,
            "ample": True,
        }
        _, flat_text = execute("positivity", doc, divisor="flat")
        assert json_block(flat_text) == {
            "cartier": True,
            "basepoint_free": True,
            "ample": False,
        }

    def test_anticanonical(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, text = execute("anticanonical", doc)
        payload = json_block(text)
        assert payload["colours"] == {"a1": 2, "a2": 2}
        assert set(payload["rays"].values()) == {1}

    def test_smooth(self):
        doc = parse_input(CLASS_GROUP_DOC)
        _, text = execute("smooth", doc)
        payload = json_block(text)
        assert payload["smooth"] is False
        bad_cones = [c for c in payload["cones"] if not c["simplicial"]]
        assert len(bad_cones) == 1 and len(bad_cones[0]["multiset"]) == 3

    def test_decolour_output_reparses(self):
        doc = parse_input(ORBITS_DOC)
        _, text = execute("decolour", doc)
        payload = json_block(text)
        stripped = parse_input(json.dumps(payload))
        assert all(not cc.colours for cc in stripped.fan.cones)
        code, _ = execute("validate", stripped)
        assert code == 0

    def test_orbit_closure(self):
        doc = parse_input(ORBITS_DOC)
        ray_index = next(
            i
            for i, cc in enumerate(doc.fan.cones)
            if cc.cone.generators == ((0, 1),) and not cc.colours
        )
        code, text = execute("orbit-closure", doc, cone=ray_index)
        assert code == 0
        payload = json_block(text)
        closure_doc = parse_input(json.dumps(payload))
        assert closure_doc.fan.lattice.rank == 1
        assert closure_doc.datum.parabolic == frozenset()

    def test_weight_monoid(self):
        doc = parse_input(
            json.dumps(
                {
                    "group": "A2",
                    "M": [[1, 0], [0, 1]],
                    "fan": [
                        {"generators": [[1, 0], [0, 1]], "colours": ["a1", "a2"]},
                        {"generators": [[1, 0]], "colours": ["a1"]},
                        {"generators": [[0, 1]], "colours": ["a2"]},
                    ],
                }
            )
        )
        quadrant = next(i for i, cc in enumerate(doc.fan.cones) if cc.dim() == 2)
        _, text = execute("weight-monoid", doc, cone=quadrant)
        assert json_block(text)["generators"] == [[0, 1], [1, 0]]

    def test_morphism(self):
        plane = parse_input(
            json.dumps(
                {
                    "group": "A1",
                    "M": [[1]],
                    "fan": [{"generators": [[1]], "colours": ["a1"]}],
                }
            )
        )
        blowup = parse_input(
            json.dumps(
                {"group": "A1", "M": [[1]], "fan": [{"generators": [[1]], "colours": []}]}
            )
        )
        line = parse_input(json.dumps({"group": "A1", "M": [], "fan": []}))
        code, text = execute("morphism", blowup, target=plane)
        assert code == 0
        assert json_block(text) == {
            "compatible": True,
            "proper": True,
            "matrix": [[1]],
            "dominantly_mapped": [],
        }
        _, text2 = execute("morphism", plane, target=line)
        payload = json_block(text2)
        assert payload["compatible"] is False and payload["proper"] is False

    def test_missing_divisor_argument(self):
        doc = parse_input(CLASS_GROUP_DOC)
        with pytest.raises(ParseError):
            execute("cartier", doc)
        with pytest.raises(ParseError):
            execute("cartier", doc, divisor="nope")

    def test_outputs_deterministic(self):
        for command in ["orbits", "classify", "class-group", "picard", "smooth"]:
            doc1 = parse_input(CLASS_GROUP_DOC)
            doc2 = parse_input(CLASS_GROUP_DOC)
            assert execute(command, doc1) == execute(command, doc2)


class TestMain:
    def test_exit_codes(self, tmp_path, capsys):
        good = tmp_path / "good.json"
        good.write_text(ORBITS_DOC)
        assert main(["orbits", str(good)]) == 0
        out = capsys.readouterr().out
        assert "---JSON---" in out

        bad_fan = tmp_path / "bad_fan.json"
        bad_fan.write_text(
            json.dumps(
                {
                    "group": "A2",
                    "M": [[1, 0], [0, 1]],
                    "fan": [{"generators": [[1, 0], [0, 1]], "colours": ["a1"]}],
                }
            )
        )
        assert main(["validate", str(bad_fan)]) == 1

        bad_json = tmp_path / "bad.json"
        bad_json.write_text("{")
        assert main(["validate", str(bad_json)]) == 2

        assert main(["orbits", str(tmp_path / "missing.json")]) == 2

    def test_stdin_input(self, monkeypatch, capsys):
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(ORBITS_DOC))
        assert main(["classify", "-"]) == 0
        assert "projective" in capsys.readouterr().out

    def test_morphism_via_files(self, tmp_path, capsys):
        plane = tmp_path / "plane.json"
        plane.write_text(
            json.dumps(
                {"group": "A1", "M": [[1]], "fan": [{"generators": [[1]], "colours": ["a1"]}]}
            )
        )
        blowup = tmp_path / "blowup.json"
        blowup.write_text(
            json.dumps(
                {"group": "A1", "M": [[1]], "fan": [{"generators": [[1]], "colours": []}]}
            )
        )
        assert main(["morphism", str(blowup), "--target", str(plane)]) == 0
        assert '"proper": true' in capsys.readouterr().out
