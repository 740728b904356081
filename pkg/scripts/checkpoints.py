"""Print the lower-bound integral table with exact values and reference agreement."""
from cantorq.distortion import CHECKPOINT_REFERENCE, V2, checkpoint_matches, proof_checkpoint_integrals


def main():
    width = max(map(len, CHECKPOINT_REFERENCE))
    bad = 0
    for name, value in proof_checkpoint_integrals().items():
        ref = CHECKPOINT_REFERENCE[name]
        ok = checkpoint_matches(value, ref)
        bad += not ok
        margin = "" if "/" in ref else f"  exceeds V2 by {float(value - V2):.3e}"
        print(f"{name:<{width}}  {float(value):.10f}  ref {ref:<10} {'ok' if ok else 'MISMATCH'}{margin}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
