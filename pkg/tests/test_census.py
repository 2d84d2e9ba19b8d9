import json

import pytest

from troplanar import census as cz
from troplanar.graphs import chain_count
from troplanar.lattice import enumerate_maximal_nonhyperelliptic
from troplanar.skeleton import skeleton
from troplanar.triangulation import is_regular


def test_genus_guards():
    with pytest.raises(ValueError):
        cz.check_genus(1)
    with pytest.raises(cz.ResourceGuard):
        cz.check_genus(8, long_run=True)
    with pytest.raises(cz.ResourceGuard):
        cz.check_genus(7)
    cz.check_genus(7, long_run=True)


@pytest.mark.parametrize("g,count", [(2, 2), (3, 4), (4, 13), (5, 38)])
def test_small_census(records, g, count):
    assert len(records[g]) == count


def test_provenance_replays_to_the_graph(records):
    for g in (3, 4, 5):
        rec = records[g]
        for cert, provs in rec.provenance.items():
            assert provs
            for prov in provs:
                if prov.triangulation_id < 0:
                    assert prov.lattice_width == 2
                    continue
                t = cz.replay(prov.polygon, prov.triangulation_id)
                assert is_regular(t)
                assert skeleton(t).certificate == cert


def test_chains_are_included(records):
    for g in (3, 4, 5):
        hyper = cz.hyperelliptic_skeletons(g)
        assert len(hyper) == chain_count(g)
        assert hyper <= set(records[g].certificates)


def test_snapshot_is_sorted_and_hashed(records):
    rec = records[4]
    snap = rec.snapshot()
    assert snap["genus"] == 4
    data = rec.snapshot_bytes()
    assert data.endswith(b"\n")
    assert json.loads(data) == snap
    assert len(rec.snapshot_hash()) == 64


def test_database_round_trip(tmp_path, records):
    db = cz.CensusDatabase(tmp_path)
    rec = cz.run_census(4, db=db)
    assert rec.snapshot_hash() == records[4].snapshot_hash()
    assert cz.replay_log(db, 4).snapshot_hash() == rec.snapshot_hash()
    snaps = list(tmp_path.glob("snapshot-g4-*.json"))
    assert len(snaps) == 1
    assert snaps[0].read_bytes() == rec.snapshot_bytes()


def test_resume_after_interruption(tmp_path, records):
    db = cz.CensusDatabase(tmp_path)
    cz.run_census(5, db=db)
    lines = db.log_path(5).read_text().splitlines()
    first_done = next(i for i, ln in enumerate(lines) if '"polygon_finished"' in ln)
    # keep one finished polygon, one half-written polygon, and a torn last line
    cut = lines[: first_done + 3]
    db.log_path(5).write_text("\n".join(cut) + "\n" + cut[-1][:17])
    with pytest.raises(RuntimeError):
        cz.replay_log(db, 5)
    assert len(db.finished_polygons(5)) == 1
    scanned = []
    rec = cz.run_census(5, db=db, progress=scanned.append)
    assert len(scanned) == len(enumerate_maximal_nonhyperelliptic(5)) - 1
    assert rec.snapshot_hash() == records[5].snapshot_hash()


def test_threads_give_the_same_record(records):
    rec = cz.run_census(5, threads=2)
    assert rec.snapshot_hash() == records[5].snapshot_hash()


def test_census_is_deterministic(records):
    assert cz.run_census(4).snapshot_bytes() == records[4].snapshot_bytes()


def test_two_edge_connected_subset(records):
    rec = records[5]
    tec = rec.two_edge_connected()
    assert 0 < len(tec) < len(rec)
    assert all(rec.graphs[c].is_two_edge_connected() for c in tec)


def test_stratify_and_bounds(records):
    strata = cz.stratify_by_lattice_width(records[5])
    assert strata["strata_sum"] >= len(records[5])
    report = cz.bound_report(records[5])
    assert report["bridge_bound_ok"]
    assert all(row["ok"] for row in report["triangulation_bounds"])


def test_genus4_breakdown(records):
    rep = cz.breakdown_report(4, records[4], {g: records[g] for g in (2, 3)})
    assert rep.consistent()
    d = rep.to_dict()
    assert d["troplanar"] == 13
