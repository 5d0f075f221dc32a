"""
The ratlogic command line
=========================

Runs each subcommand on the files in ``data/`` and shows output and exit status.
"""

import subprocess
import sys
from pathlib import Path

data = Path(__file__).parent / "data"


def ratlogic(*args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "ratlogic", *map(str, args)], capture_output=True, text=True, input=stdin)
    print("$ ratlogic", " ".join(map(str, args)))
    print((proc.stdout + proc.stderr).rstrip())
    print(f"[exit {proc.returncode}]\n")


ratlogic("solve", "v0 := or[v0, v0]")
ratlogic("solve", "v0 := or[~v0, v0]", "--format", "dot")
ratlogic("negate", data / "mixed.frm")
ratlogic("subst", "and[~v0]", "or[v1]", "v0")

# exit 0 for valid, 1 for a violation, 2 for unreadable input
ratlogic("check", data / "axiom.deriv")
ratlogic("check", data / "loop.deriv")
ratlogic("check", data / "bad.deriv")
ratlogic("check", data / "typo.deriv")
ratlogic("skeleton", data / "loop.deriv", "--format", "kv")

ratlogic("interact", "--depth", "64", data / "axiom.skel", "or[v0, ~v0]")
ratlogic("interact", data / "axiom.skel", "or[v0]", "--trace")
ratlogic("interact", data / "axiom.skel", "or[v0]", "--format", "kv")
ratlogic("export", data / "defaults.skel")

# the REPL reads rules from stdin; a bad line is asked again
ratlogic("repl", "or[v0, ~v0]", stdin="or(0,0\nax(v0,0,1)\n")
