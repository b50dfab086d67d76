import { describe, expect, it } from "vitest";

import {
  beginQuery,
  initialState,
  receiveBundle,
  receiveError,
  toggleLowConfidence,
} from "../src/state.js";
import { AnswerBundle } from "../src/types.js";

import spanBundle from "./fixtures/span.json";
import exploratoryBundle from "./fixtures/exploratory.json";

const span = spanBundle as unknown as AnswerBundle;
const exploratory = exploratoryBundle as unknown as AnswerBundle;

describe("view state", () => {
  it("starts with hidden low-confidence candidates", () => {
    expect(initialState().lowConfidenceVisible).toBe(false);
  });

  it("toggle is an involution", () => {
    const once = toggleLowConfidence(initialState());
    expect(once.lowConfidenceVisible).toBe(true);
    expect(toggleLowConfidence(once).lowConfidenceVisible).toBe(false);
  });

  it("a new query resets low-confidence visibility", () => {
    let state = receiveBundle(beginQuery(initialState(), "q1"), "q1", exploratory);
    state = toggleLowConfidence(state);
    expect(state.lowConfidenceVisible).toBe(true);
    state = beginQuery(state, "q2");
    expect(state.lowConfidenceVisible).toBe(false);
    expect(state.loading).toBe(true);
  });

  it("stale responses never replace a newer query's view", () => {
    let state = beginQuery(initialState(), "old query");
    state = beginQuery(state, "new query");
    const stale = receiveBundle(state, "old query", span);
    expect(stale.bundle).toBeNull();
    const fresh = receiveBundle(state, "new query", span);
    expect(fresh.bundle).toBe(span);
    expect(fresh.loading).toBe(false);
  });

  it("errors retain the previous view", () => {
    let state = receiveBundle(beginQuery(initialState(), "q1"), "q1", span);
    state = beginQuery(state, "q2");
    state = receiveError(state, "q2", "boom");
    expect(state.error).toBe("boom");
    expect(state.bundle).toBe(span);
  });

  it("stale errors are ignored", () => {
    let state = beginQuery(initialState(), "current");
    state = receiveError(state, "older", "boom");
    expect(state.error).toBeNull();
  });
});
