import pytest

from awnbench.kinds import ProtocolKind, Role
from awnbench.adversary import (
    AttackBed, CompromiseAndDecryptPast, Eavesdrop, Impersonation, KciImpersonation, LoweMitm,
    PrivacyScan, Replay, SCRIPTS, ScriptError, UnknownKeyShare, check_evidence,
    parse_script, run_attack
)


def test_lowe_relay_breaks_only_the_unfixed_variant():
    broken = run_attack(ProtocolKind.TKDF_ASYM_UNFIXED, LoweMitm(), seed=1)
    assert broken.success
    assert broken.evidence.derived_keys
    assert check_evidence(ProtocolKind.TKDF_ASYM_UNFIXED, broken.evidence)

    fixed = run_attack(ProtocolKind.TKDF_ASYM, LoweMitm(), seed=1)
    assert not fixed.success
    assert fixed.evidence.derived_keys == []


def test_replay_breaks_only_the_unfixed_variant():
    broken = run_attack(ProtocolKind.TKDF_SYM_UNFIXED, Replay(), seed=2)
    assert broken.success
    assert broken.goal_refs == ['G5', 'G7']

    fixed = run_attack(ProtocolKind.TKDF_SYM, Replay(), seed=2)
    assert not fixed.success


def test_eavesdropper_learns_nothing():
    for kind in (ProtocolKind.PSK_MASTER, ProtocolKind.TKDF_SYM, ProtocolKind.ON_DEMAND_STS):
        outcome = run_attack(kind, Eavesdrop(), seed=0)
        assert not outcome.success, kind
        assert outcome.evidence.frames


def test_compromise_after_the_session():
    assert run_attack('WEP', CompromiseAndDecryptPast('A')).success
    assert run_attack('WPA-PSK', CompromiseAndDecryptPast('B')).success
    assert not run_attack('SSH', CompromiseAndDecryptPast('A')).success
    assert not run_attack('SymTKDF', CompromiseAndDecryptPast('S')).success

    with pytest.raises(ScriptError):
        run_attack('SSH', CompromiseAndDecryptPast('C'))


def test_group_keys_allow_key_compromise_impersonation():
    script = KciImpersonation(compromised_node='C', impersonated='B', victim='A')
    assert run_attack(ProtocolKind.PSK_DIRECT, script).success
    assert run_attack(ProtocolKind.PSK_MASTER, script).success
    assert not run_attack(ProtocolKind.PSK_NET_LAYER, script).success
    assert not run_attack(ProtocolKind.ON_DEMAND_STS, script).success

    with pytest.raises(ScriptError):
        run_attack(ProtocolKind.PSK_DIRECT, KciImpersonation(compromised_node='B'))


def test_outsider_cannot_impersonate():
    for kind in (ProtocolKind.PSK_DIRECT, ProtocolKind.TKDF_SYM, ProtocolKind.ON_DEMAND_STS):
        assert not run_attack(kind, Impersonation()).success
        assert not run_attack(kind, Impersonation('A', 'B', attacker_initiates=True)).success


def test_identities_are_visible_on_the_air():
    outcome = run_attack(ProtocolKind.ON_DEMAND_STS, PrivacyScan())
    assert outcome.success
    assert any('(A)' in f for f in outcome.evidence.findings)


def test_scripts_that_do_not_apply():
    with pytest.raises(ScriptError):
        run_attack(ProtocolKind.PSK_MASTER, LoweMitm())
    with pytest.raises(ScriptError):
        run_attack(ProtocolKind.TKDF_SYM, UnknownKeyShare())
    with pytest.raises(ScriptError):
        run_attack(ProtocolKind.PSK_MASTER, Impersonation(impersonated='Q'))


def test_outcome_is_deterministic_and_json_ready():
    one = run_attack(ProtocolKind.TKDF_ASYM_UNFIXED, LoweMitm(), seed=5).api.json()
    two = run_attack(ProtocolKind.TKDF_ASYM_UNFIXED, LoweMitm(), seed=5).api.json()
    assert one == two
    assert one['protocol'] == 'TkdfAsymUnfixed'
    assert one['script'] == 'lowe-mitm'
    assert one['success'] is True
    assert set(one['evidence']) >= {'frames', 'derived_keys'}


def test_parse_script():
    assert set(SCRIPTS) == {
        'eavesdrop', 'replay', 'lowe-mitm', 'impersonation', 'kci', 'compromise-past',
        'unknown-key-share', 'privacy-scan',
    }
    assert parse_script('kci', compromised_node='I') == KciImpersonation(compromised_node='I')
    assert parse_script('kci', compromised_node=None) == KciImpersonation()
    with pytest.raises(ScriptError):
        parse_script('nope')
    with pytest.raises(ScriptError):
        parse_script('eavesdrop', compromised_node='A')


@pytest.mark.parametrize('kind', [ProtocolKind.PSK_MASTER, ProtocolKind.TKDF_SYM])
def test_bed_engines_time_out_on_the_bed_latency(kind):
    bed = AttackBed(kind, seed=0)
    for role in (Role.INITIATOR, Role.RESPONDER):
        engine = bed.engine(role, bed.ids('A', 'Z'))
        assert engine.retry.one_way_us == 1000
    assert bed.topology.retry_policy(bed.ids(), kind).one_way_us == 1000
