// View fixtures shaped exactly like the server's PlayerView payloads.

import type { PlayerView } from "../src/types.js";

export function baseView(overrides: Partial<PlayerView>): PlayerView {
  return {
    challenge_id: "c1",
    title: "A challenge",
    stage: "challenge",
    attempts: 0,
    score: 100,
    base_points: 100,
    guiding_question: "What is the safe call?",
    taken_hints: [],
    available_hint_count: 0,
    ...overrides,
  };
}

export const scqView = baseView({
  body: { type: "scq", options: ["gets(buffer)", "fgets(buffer, n, stdin)", "strcat(buffer, x)"] },
});

export const mcqView = baseView({
  body: { type: "mcq", options: ["concatenate", "parameterize", "allow-list", "echo errors"] },
});

export const teqView = baseView({
  body: { type: "teq" },
  guiding_question: "Type the name of the bounded copy.",
});

export const cscView = baseView({
  body: {
    type: "csc",
    code: "char name[32];\ngets(name);\nprintf(\"%s\", name);",
    units: ["line 1: char name[32];", "line 2: gets(name);", "line 3: printf(\"%s\", name);"],
    prompt_mode: "find-violated-guideline",
  },
});

export const cecView = baseView({
  body: { type: "cec", starter_code: "strcpy(tag, name); /* <-- fix me */" },
});

export const alrView = baseView({
  body: {
    type: "alr",
    left: ["CERT STR31-C", "OWASP A03"],
    right: ["injection", "buffer overflow"],
  },
});
