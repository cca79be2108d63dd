"""Positive / negative / malformed invocations for every subcommand.

Paths are relative to the tests directory.  Each entry is
(subcommand, kind, argv); kind is 0, 1 or 2, the expected exit status.
"""
F = "fixtures/"

CASES = [
    ("reduce", 0, ["reduce", "a b b^-1"]),
    ("reduce", 1, ["reduce", "a a^-1"]),
    ("reduce", 2, ["reduce", "a ^"]),
    ("cyc", 0, ["cyc", "b a b a^-1 b^-1"]),
    ("cyc", 1, ["cyc", "a b b^-1 a^-1"]),
    ("cyc", 2, ["cyc", "a^0"]),
    ("piece", 0, ["piece", "a^5 b", "a b^5"]),
    ("piece", 1, ["piece", "a b", "a b"]),
    ("piece", 2, ["piece", "a ^", "b"]),
    ("sc-check", 0, ["sc-check", "--m", "3", "c^3 b^-1 a c^-1 b^-1 a^-1 b^-1, b^-2 c b c^-1 b a^-3"]),
    ("sc-check", 1, ["sc-check", "--m", "3", "a^5 b, a b^5"]),
    ("sc-check", 2, ["sc-check", "--m", "3", "a b a^-1"]),
    ("axis", 0, ["axis", "a b", "a c", "--g", "b"]),
    ("axis", 1, ["axis", "a b", "b a", "--g", "a"]),
    ("axis", 2, ["axis", "1", "a"]),
    ("conj", 0, ["conj", "x", "y^-1 x y"]),
    ("conj", 1, ["conj", "a", "b"]),
    ("conj", 2, ["conj", "a", "(b)"]),
    ("member", 0, ["member", "--gens", "a^2, b", "a^2 b"]),
    ("member", 1, ["member", "--gens", "a^2", "a"]),
    ("member", 2, ["member", "--gens", "a^2,", "a"]),
    ("pi-eval", 0, ["pi-eval", "--group", F + "s3.grp", "--pi", "a:p102,b:p120", "a b a"]),
    ("pi-eval", 1, ["pi-eval", "--cyclic", "2", "--pi", "a:1", "--expect", "0", "a^3"]),
    ("pi-eval", 2, ["pi-eval", "--cyclic", "2", "--pi", "a:1", "b"]),
    ("pi-check", 0, ["pi-check", "--group", F + "s3.grp", "p120 p201"]),
    ("pi-check", 1, ["pi-check", "--group", F + "s3.grp", "p102 p120"]),
    ("pi-check", 2, ["pi-check", "--group", F + "s3.grp", "p999"]),
    ("gog-validate", 0, ["gog-validate", F + "star_abelian.gog"]),
    ("gog-validate", 1, ["gog-validate", F + "bad.gog"]),
    ("gog-validate", 2, ["gog-validate", F + "broken.gog"]),
    ("present", 0, ["present", F + "z2_hnn.gog"]),
    ("present", 1, ["present", F + "bad.gog"]),
    ("present", 2, ["present", F + "missing.gog"]),
    ("nf", 0, ["nf", F + "amalgam23.gog", "a^3 b a"]),
    ("nf", 1, ["nf", F + "amalgam23.gog", "a^2 b^-3"]),
    ("nf", 2, ["nf", F + "amalgam23.gog", "z"]),
    ("equal", 0, ["equal", F + "z2_hnn.gog", "a t", "t a"]),
    ("equal", 1, ["equal", F + "amalgam23.gog", "a b", "b a"]),
    ("equal", 2, ["equal", F + "z2_hnn.gog", "a", "q"]),
    ("collapse", 0, ["collapse", F + "star_abelian.gog", "--edges", "e1"]),
    ("collapse", 1, ["collapse", F + "bad.gog", "--edges", "e"]),
    ("collapse", 2, ["collapse", F + "star_abelian.gog", "--edges", "nope"]),
    ("blowup", 0, ["blowup", F + "amalgam_fcb.gog", "--vertex", "u", "--sub", F + "split_u.gog", "--attach", "e:u2"]),
    ("blowup", 1, ["blowup", F + "amalgam_fcb.gog", "--vertex", "u", "--sub", F + "split_u.gog", "--attach", "e:u1"]),
    ("blowup", 2, ["blowup", F + "amalgam_fcb.gog", "--vertex", "u", "--sub", F + "split_u.gog", "--attach", "e"]),
    ("fold", 0, ["fold", F + "amalgam_fcb.gog", "--vertex", "u", "--fold", "e:d,b"]),
    ("fold", 1, ["fold", F + "amalgam_fcb.gog", "--vertex", "u", "--fold", "e:b"]),
    ("fold", 2, ["fold", F + "amalgam_fcb.gog", "--vertex", "u", "--fold", "e"]),
    ("slide", 0, ["slide", F + "star_abelian.gog", "e2", "e1"]),
    ("slide", 1, ["slide", F + "star_abelian.gog", "e1", "e2"]),
    ("slide", 2, ["slide", F + "star_abelian.gog", "e1", "zz"]),
    ("twist", 0, ["twist", F + "star_abelian.gog", "--edge", "e", "--by", "a"]),
    ("twist", 1, ["twist", F + "star_abelian.gog", "--edge", "e", "--by", "b"]),
    ("twist", 2, ["twist", F + "star_abelian.gog", "--edge", "e", "--by", "a^"]),
    ("vext", 0, ["vext", F + "z2_hnn.gog", "--vertex", "v", "--inv", "a:a", "--twisters", "t:a"]),
    ("vext", 1, ["vext", F + "star_abelian.gog", "--vertex", "u", "--sigma", "b:b a", "--inv", "b:b"]),
    ("vext", 2, ["vext", F + "star_abelian.gog", "--vertex", "u", "--inv", "b"]),
    ("apply", 0, ["apply", F + "star_abelian.gog", "--auts", "twist e by a; inner b", "x p"]),
    ("apply", 1, ["apply", F + "star_abelian.gog", "--auts", "twist e by b", "x"]),
    ("apply", 2, ["apply", F + "star_abelian.gog", "--auts", "spin e", "x"]),
    ("pi-modular", 0, ["pi-modular", "--group", F + "s3.grp", F + "s3_fcb.gog", "--auts", "@" + F + "s3_twists.aut"]),
    ("pi-modular", 1, ["pi-modular", "--group", F + "s3.grp", F + "s3_fcb.gog", "--auts", "inner a"]),
    ("pi-modular", 2, ["pi-modular", F + "s3_fcb.gog", "--auts", "inner a"]),
    ("gen-sc", 0, ["gen-sc", "--cyclic", "2", "--source", "g1 g2", "--target", "x y", "--pi", "g1:1,x:1", "--m", "3"]),
    ("gen-sc", 1, ["gen-sc", "--source", "g1", "--target", "x", "--m", "3"]),
    ("gen-sc", 2, ["gen-sc", "--source", "g1", "--target", "x y", "--m", "three"]),
    ("gen-abelian", 0, ["gen-abelian", "--gens", "x y1 y2", "--K", "2", "--r", "1 0", "--n", "2"]),
    ("gen-abelian", 1, ["gen-abelian", "--gens", "x y1 y2", "--K", "2", "--r", "1 1", "--n", "2"]),
    ("gen-abelian", 2, ["gen-abelian", "--gens", "x y1", "--K", "2", "--r", "1 0", "--n", "2"]),
    ("discriminate", 0, ["discriminate", "--K", "2", "--r", "1", "--B", "3", "--n", "9"]),
    ("discriminate", 1, ["discriminate", "--K", "1", "--r", "0", "--B", "2", "--n", "1"]),
    ("discriminate", 2, ["discriminate", "--K", "1", "--r", "0", "--B", "2"]),
    ("growth", 0, ["growth", "--gens", "x y", "--K", "2", "--r", "1", "--n1", "1", "--n2", "2", "--g1", "y"]),
    ("growth", 1, ["growth", "--gens", "x y", "--K", "2", "--r", "1", "--n1", "1", "--n2", "2", "--g1", "y", "--g2", "y x^-13"]),
    ("growth", 2, ["growth", "--gens", "x y", "--K", "2", "--r", "1", "--n1", "1", "--n2", "2", "--g1", "z"]),
    ("schedule", 0, ["schedule", F + "amalgam_fcb.gog", "--weights", "e:1", "--twisters", "e:c", "--map", "c:c^2", "--n", "7"]),
    ("schedule", 1, ["schedule", F + "amalgam_fcb.gog", "--weights", "e:1", "--twisters", "e:c", "--map", "c:1", "--n", "7"]),
    ("schedule", 2, ["schedule", F + "amalgam_fcb.gog", "--weights", "e:x", "--twisters", "e:c", "--n", "7"]),
    ("ext-check", 0, ["ext-check", "--k", "2", "--e", "4"]),
    ("ext-check", 1, ["ext-check", "--k", "2", "--e", "3"]),
    ("ext-check", 2, ["ext-check", "--k", "2", "--e", "4 4"]),
    ("cong", 0, ["cong", "intersect", F + "odd.cong", F + "two_mod3.cong"]),
    ("cong", 1, ["cong", "intersect", F + "odd.cong", F + "even.cong"]),
    ("cong", 2, ["cong", "union", F + "odd.cong", F + "broken.cong"]),
    ("verify-formal", 0, ["verify-formal", F + "commutator.prob", "--witness", "x"]),
    ("verify-formal", 1, ["verify-formal", F + "counterexample.prob", "--witness", "1"]),
    ("verify-formal", 2, ["verify-formal", F + "broken.prob", "--witness", "1"]),
    ("search-formal", 0, ["search-formal", F + "commutator.prob", "--length", "2"]),
    ("search-formal", 1, ["search-formal", F + "counterexample.prob", "--length", "3"]),
    ("search-formal", 2, ["search-formal", F + "counterexample.prob", "--length", "99"]),
    ("tr-compare", 0, ["tr-compare", "r=3(a=2(b=1), c=2)", "r=3(a=2(b=0), c=2)"]),
    ("tr-compare", 1, ["tr-compare", "3(2)", "3(2)"]),
    ("tr-compare", 2, ["tr-compare", "3(2", "3"]),
]

# extra golden cases: alternative formats and options
EXTRA = [
    ("reduce-verbose", 0, ["--format", "verbose", "reduce", "a a b^-1 b c"]),
    ("conj-verbose", 0, ["--format", "verbose", "conj", "a b", "b a"]),
    ("member-verbose", 0, ["--format", "verbose", "member", "--gens", "a b, b", "a"]),
    ("sc-check-verbose", 1, ["--format", "verbose", "sc-check", "--m", "6", "c^3 b^-1 a c^-1 b^-1 a^-1 b^-1, b^-2 c b c^-1 b a^-3"]),
    ("nf-verbose", 0, ["--format", "verbose", "nf", "fixtures/z2_hnn.gog", "t^2 a"]),
    ("cong-complement", 0, ["cong", "complement", "fixtures/pair4.cong"]),
    ("cong-member", 0, ["cong", "member", "fixtures/pair4.cong", "--point", "5 -1"]),
    ("cong-union", 0, ["cong", "union", "fixtures/odd.cong", "fixtures/two_mod3.cong"]),
    ("discriminate-ball", 0, ["discriminate", "--gens", "x y", "--K", "1", "--r", "0", "--radius", "3"]),
    ("search-copy", 0, ["search-formal", "fixtures/copy.prob", "--length", "2"]),
    ("search-parity", 1, ["search-formal", "--cyclic", "2", "fixtures/parity.prob", "--length", "3"]),
    ("tr-compare-order", 0, ["tr-compare", "--order", "fixtures/three.ord", "high(mid)", "high(low)"]),
    ("tr-compare-verbose", 0, ["--format", "verbose", "tr-compare", "3(2)", "3(1(0))"]),
    ("ext-check-pi", 1, ["ext-check", "--cyclic", "4", "--k", "2", "--e", "4", "--pi-peg", "1", "--pi-mbar", "1"]),
    ("ext-check-empty", 0, ["ext-check", "--k", "", "--e", ""]),
    ("collapse-hnn", 0, ["collapse", "fixtures/z2_hnn.gog", "--edges", "t"]),
    ("present-amalgam", 0, ["present", "fixtures/amalgam23.gog"]),
    ("gen-sc-m5", 0, ["gen-sc", "--source", "g1 g2 g3", "--target", "x y", "--m", "5"]),
    ("schedule-verbose", 0, ["--format", "verbose", "schedule", "fixtures/amalgam_fcb.gog", "--weights", "e:3/2", "--twisters", "e:c", "--n", "5"]),
    ("pi-eval-expect", 0, ["pi-eval", "--cyclic", "3", "--pi", "a:1,b:2", "--expect", "0", "a b"]),
]
