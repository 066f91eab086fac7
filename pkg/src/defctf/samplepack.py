"""Reference pack: one challenge per type, C string-handling and
input-validation themes.

Shipped as ``packs/sample.json``; tests and demos load it as a fixture.
The six challenges deliberately spread out over every wrong-branch and
correct-branch policy and over all three hint kinds, so a tour of this
pack exercises the whole stage machine. Content is illustrative training
material, not a curriculum.
"""

from __future__ import annotations

from .model import (
    AssociateBody,
    Challenge,
    ChallengePack,
    CodeEntryBody,
    CodeRule,
    CodeSnippetBody,
    ConclusionStage,
    CorrectBranch,
    CorrectBranchPolicy,
    CSCPromptMode,
    GuidelineRef,
    GuidelineSource,
    HintKind,
    HintSpec,
    IntroStage,
    MappingCardinality,
    MultiChoiceBody,
    RuleKind,
    ScorePolicy,
    SelectableUnit,
    SingleChoiceBody,
    TextEntryBody,
    UnlockRule,
    WrongBranch,
    WrongBranchPolicy,
)

STR31 = GuidelineRef(
    GuidelineSource.CERT,
    "STR31-C",
    "Guarantee that storage for strings has sufficient space for character data and the null terminator",
)
FIO30 = GuidelineRef(GuidelineSource.CERT, "FIO30-C", "Exclude user input from format strings")
MEM30 = GuidelineRef(GuidelineSource.CERT, "MEM30-C", "Do not access freed memory")
A03 = GuidelineRef(GuidelineSource.OWASP, "A03:2021", "Injection")
A01 = GuidelineRef(GuidelineSource.OWASP, "A01:2021", "Broken Access Control")

_CSC_CODE = """\
#include <stdio.h>

int read_name(void) {
    char name[32];
    printf("name: ");
    gets(name);
    printf("hello %s\\n", name);
    return 0;
}"""

_CEC_STARTER = """\
#include <string.h>

void format_tag(char *out, size_t out_size, const char *name) {
    char tag[64];
    strcpy(tag, "user:");
    strcat(tag, name);
    strcpy(out, tag);
}"""

_CEC_FIXED = """\
#include <stdio.h>
#include <string.h>

void format_tag(char *out, size_t out_size, const char *name) {
    char tag[64];
    snprintf(tag, sizeof(tag), "user:%s", name);
    snprintf(out, out_size, "%s", tag);
}"""


def _scq_bounded_read() -> Challenge:
    return Challenge(
        id="scq-bounded-read",
        title="Reading input without overflowing",
        base_points=100,
        intro=IntroStage(
            text=(
                "Fixed-size buffers overflow when input length is never checked. "
                "Classic C input routines differ in whether the caller can state "
                "the destination buffer's capacity at all."
            )
        ),
        body=SingleChoiceBody(
            guiding_question=(
                "Which call reads a line of user input into a fixed-size buffer "
                "without risking an overflow?"
            ),
            options=(
                "gets(buffer)",
                "fgets(buffer, sizeof(buffer), stdin)",
                'scanf("%s", buffer)',
                "strcat(buffer, input)",
            ),
            correct_index=1,
        ),
        hints=(
            HintSpec(
                hint_id="scq-h1",
                kind=HintKind.CONCEPT_DISCLOSURE,
                text="Only one of the calls lets you state how large the destination is.",
                cost=10,
                unlock=UnlockRule(after_seconds=60, after_failed_attempts=1),
            ),
        ),
        wrong_branch=WrongBranchPolicy(policy=WrongBranch.RETURN_TO_CHALLENGE, max_attempts=3),
        correct_branch=CorrectBranchPolicy(policy=CorrectBranch.CONCLUDE_THEN_FINISH),
        conclusion=ConclusionStage(
            explanation=(
                "fgets takes the buffer size and stops reading before it overruns the "
                "destination, leaving room for the terminator. gets was removed from C11 "
                "precisely because it cannot be used safely."
            ),
            references=("https://wiki.sei.cmu.edu/confluence/display/c/STR31-C",),
        ),
        score_policy=ScorePolicy(penalize_retries=True, retry_penalty=5),
        guideline=STR31,
    )


def _mcq_injection_defenses() -> Challenge:
    return Challenge(
        id="mcq-injection-defenses",
        title="Stopping SQL injection",
        base_points=120,
        intro=IntroStage(
            text=(
                "Injection happens when untrusted input is interpreted as part of a "
                "query or command. Defenses separate data from code instead of trying "
                "to sanitize strings after the fact."
            )
        ),
        body=MultiChoiceBody(
            guiding_question="Which practices prevent SQL injection? Select all that apply.",
            options=(
                "Build queries by concatenating request parameters",
                "Use parameterized queries (prepared statements)",
                "Validate input against an allow-list before use",
                "Echo raw database errors back to the user",
                "Bind values through the ORM's query parameters",
            ),
            correct_indices=frozenset({1, 2, 4}),
        ),
        hints=(
            HintSpec(
                hint_id="mcq-h1",
                kind=HintKind.EXTERNAL_REFERENCE,
                text="The OWASP cheat sheet on query parameterization covers every correct option.",
                url="https://cheatsheetseries.owasp.org/cheatsheets/SQL_Injection_Prevention_Cheat_Sheet.html",
                cost=20,
                unlock=UnlockRule(after_seconds=90, after_failed_attempts=1),
            ),
        ),
        wrong_branch=WrongBranchPolicy(
            policy=WrongBranch.EXPLAIN_THEN_RETURN,
            explanation=(
                "At least one selected practice still lets input reach the SQL parser as "
                "code, or one real defense is missing. Anything that keeps values out of "
                "the query text counts; anything that builds query text from input does not."
            ),
            max_attempts=2,
        ),
        correct_branch=CorrectBranchPolicy(
            policy=CorrectBranch.CONCLUDE_THEN_FINISH,
            additional_question=SingleChoiceBody(
                guiding_question="Which OWASP Top 10 (2021) category covers SQL injection?",
                options=(
                    "A01 Broken Access Control",
                    "A03 Injection",
                    "A05 Security Misconfiguration",
                ),
                correct_index=1,
            ),
        ),
        conclusion=ConclusionStage(
            explanation=(
                "Parameterized queries, allow-list validation, and ORM parameter binding "
                "all keep user data out of the query text. String concatenation and "
                "verbose database errors do the opposite: one injects, the other teaches "
                "the attacker the schema."
            ),
            references=("https://owasp.org/Top10/A03_2021-Injection/",),
        ),
        guideline=A03,
    )


def _teq_bounded_copy() -> Challenge:
    return Challenge(
        id="teq-bounded-copy",
        title="Name the bounded copy",
        base_points=80,
        intro=IntroStage(
            text=(
                "The classic C string functions assume the destination is always large "
                "enough. Their length-bounded counterparts take the maximum number of "
                "bytes to write as an extra argument."
            )
        ),
        body=TextEntryBody(
            guiding_question=(
                "strcpy(dst, src) copies with no bound at all. Type the name of its "
                "length-bounded counterpart that takes the byte count as a third argument."
            ),
            accepted_answers=("strncpy", "strncpy()"),
        ),
        hints=(
            HintSpec(
                hint_id="teq-h1",
                kind=HintKind.ANSWER_DETAIL,
                text="Same name as the unbounded function, with one extra letter for the count.",
                cost=15,
            ),
        ),
        wrong_branch=WrongBranchPolicy(policy=WrongBranch.PROCEED_TO_FINISH),
        correct_branch=CorrectBranchPolicy(policy=CorrectBranch.FINISH),
        conclusion=ConclusionStage(
            explanation=(
                "strncpy(dst, src, n) writes at most n bytes. Note it does not "
                "null-terminate when src fills the bound, so pair it with an explicit "
                "terminator or prefer snprintf."
            ),
            references=("https://wiki.sei.cmu.edu/confluence/display/c/STR32-C",),
        ),
        guideline=STR31,
    )


def _csc_spot_the_violation() -> Challenge:
    return Challenge(
        id="csc-spot-the-violation",
        title="Which line breaks the rule?",
        base_points=120,
        intro=IntroStage(
            text=(
                "Secure-coding reviews work line by line: most findings are a single "
                "call that ignores a buffer bound or trusts input it should not."
            )
        ),
        body=CodeSnippetBody(
            guiding_question=(
                "One of CERT STR31-C, CERT INT30-C, or CERT FIO30-C is not being "
                "followed in this snippet. Select the line that violates it."
            ),
            code=_CSC_CODE,
            selectable_units=(
                SelectableUnit(line=4),
                SelectableUnit(line=5),
                SelectableUnit(line=6),
                SelectableUnit(line=7),
            ),
            correct_units=frozenset({2}),
            prompt_mode=CSCPromptMode.FIND_VIOLATED_GUIDELINE,
        ),
        hints=(
            HintSpec(
                hint_id="csc-h1",
                kind=HintKind.CONCEPT_DISCLOSURE,
                text=(
                    "The violated rule is about guaranteeing space for string data. "
                    "Look for a read that cannot know the buffer's size."
                ),
                cost=25,
                unlock=UnlockRule(after_seconds=120, after_failed_attempts=1),
            ),
        ),
        wrong_branch=WrongBranchPolicy(
            policy=WrongBranch.EXPLAIN_THEN_FINISH,
            explanation=(
                "The unbounded read is the violation: gets(name) will happily write "
                "past the 32-byte buffer. The printf calls here are fine — the format "
                "strings are constants."
            ),
        ),
        correct_branch=CorrectBranchPolicy(policy=CorrectBranch.CONCLUDE_THEN_FINISH),
        conclusion=ConclusionStage(
            explanation=(
                "gets cannot be told the size of name[32], so any longer input corrupts "
                "the stack — a direct STR31-C violation. The fix is fgets(name, "
                "sizeof(name), stdin) or a getline-style reader."
            ),
            references=("https://wiki.sei.cmu.edu/confluence/display/c/STR31-C",),
        ),
        guideline=STR31,
    )


def _cec_bounded_format() -> Challenge:
    return Challenge(
        id="cec-bounded-format",
        title="Fix the unsafe tag formatter",
        base_points=150,
        intro=IntroStage(
            text=(
                "Rewriting code to respect buffer bounds is the everyday form of "
                "secure coding. The coach below checks your code against the team's "
                "string-handling rules as you go."
            ),
            quiz=SingleChoiceBody(
                guiding_question="Which header declares snprintf?",
                options=("<string.h>", "<stdio.h>", "<stdlib.h>"),
                correct_index=1,
            ),
        ),
        body=CodeEntryBody(
            guiding_question=(
                "format_tag builds \"user:<name>\" but overflows both tag and out for "
                "long names. Rewrite it so every copy is bounded by the destination size."
            ),
            starter_code=_CEC_STARTER,
            rule_set=(
                CodeRule(
                    rule_id="no-strcpy",
                    kind=RuleKind.FORBIDDEN,
                    pattern="strcpy(",
                    feedback="strcpy never checks the destination size; use a length-bounded copy.",
                    guideline=STR31,
                ),
                CodeRule(
                    rule_id="no-strcat",
                    kind=RuleKind.FORBIDDEN,
                    pattern="strcat(",
                    feedback="strcat appends with no idea how much room is left; track remaining capacity instead.",
                    guideline=STR31,
                ),
                CodeRule(
                    rule_id="no-gets",
                    kind=RuleKind.MAX_OCCURRENCES,
                    pattern="gets(",
                    limit=0,
                    feedback="Never read input with gets; it has no bound at all.",
                ),
                CodeRule(
                    rule_id="derive-bound",
                    kind=RuleKind.REQUIRED,
                    pattern="sizeof(",
                    feedback="Derive the local buffer's bound from the buffer itself with sizeof.",
                ),
            ),
            known_good=(_CEC_FIXED,),
            known_bad=(_CEC_STARTER,),
        ),
        hints=(
            HintSpec(
                hint_id="cec-h1",
                kind=HintKind.CONCEPT_DISCLOSURE,
                text=(
                    "snprintf takes the destination size and truncates instead of "
                    "overflowing; one call can replace a copy plus an append."
                ),
                cost=30,
                unlock=UnlockRule(after_seconds=180, after_failed_attempts=2),
            ),
        ),
        wrong_branch=WrongBranchPolicy(policy=WrongBranch.RETURN_TO_CHALLENGE),
        correct_branch=CorrectBranchPolicy(policy=CorrectBranch.CONCLUDE_THEN_FINISH),
        conclusion=ConclusionStage(
            explanation=(
                "Every write into tag and out is now capped by the destination's real "
                "size: snprintf(tag, sizeof(tag), ...) for the local buffer and the "
                "caller-supplied out_size for the output. That is STR31-C in practice: "
                "the bound travels with the buffer."
            ),
            references=(
                "https://wiki.sei.cmu.edu/confluence/display/c/STR31-C",
                "https://cwe.mitre.org/data/definitions/120.html",
            ),
        ),
        guideline=STR31,
    )


def _alr_guideline_match() -> Challenge:
    return Challenge(
        id="alr-guideline-match",
        title="Match the rule to the weakness",
        base_points=100,
        intro=IntroStage(
            text=(
                "Guidelines earn their keep by naming the failure they prevent. "
                "Connect each rule to the weakness it is written against."
            )
        ),
        body=AssociateBody(
            guiding_question="Match each guideline to the weakness it prevents.",
            left=(
                "CERT STR31-C",
                "OWASP A03:2021 Injection",
                "CERT MEM30-C",
                "OWASP A01:2021 Broken Access Control",
            ),
            right=(
                "SQL smuggled in through user input",
                "Write past the end of a fixed buffer",
                "Use of memory after it was freed",
                "Missing server-side authorization check",
            ),
            answer_map=((0, 1), (1, 0), (2, 2), (3, 3)),
            cardinality=MappingCardinality.BIJECTIVE,
        ),
        hints=(
            HintSpec(
                hint_id="alr-h1",
                kind=HintKind.EXTERNAL_REFERENCE,
                text="",
                url="https://wiki.sei.cmu.edu/confluence/display/c/SEI+CERT+C+Coding+Standard",
                cost=10,
            ),
            HintSpec(
                hint_id="alr-h2",
                kind=HintKind.ANSWER_DETAIL,
                text="Two rows are memory-safety rules; the other two are web application risks.",
                cost=20,
                unlock=UnlockRule(after_seconds=60, after_failed_attempts=1),
            ),
        ),
        wrong_branch=WrongBranchPolicy(
            policy=WrongBranch.EXPLAIN_THEN_RETURN,
            explanation=(
                "At least one pair is crossed. Sort the left column into memory-safety "
                "rules (CERT) and web risks (OWASP) first, then match within each half."
            ),
            max_attempts=3,
        ),
        correct_branch=CorrectBranchPolicy(policy=CorrectBranch.FINISH),
        conclusion=ConclusionStage(
            explanation=(
                "STR31-C exists because of buffer overflows, MEM30-C because of "
                "use-after-free, A03 because of injection, and A01 because authorization "
                "must be enforced on the server. Knowing the weakness behind a rule makes "
                "the rule memorable."
            ),
            references=("https://owasp.org/Top10/",),
        ),
        score_policy=ScorePolicy(min_score=10),
        guideline=A01,
    )


def build_sample_pack() -> ChallengePack:
    """The reference pack: every challenge type, branch policy, and hint kind."""
    return ChallengePack(
        pack_id="sample-secure-coding",
        title="Secure coding starter pack",
        version="1.0.0",
        challenges=(
            _scq_bounded_read(),
            _mcq_injection_defenses(),
            _teq_bounded_copy(),
            _csc_spot_the_violation(),
            _cec_bounded_format(),
            _alr_guideline_match(),
        ),
        scg_catalog=(STR31, FIO30, MEM30, A03, A01),
    )
