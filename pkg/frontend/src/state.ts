/**
 * Editor state: the current design, an edit version counter, and the last
 * simulation response. Every mutating edit bumps the version; a response is
 * applied only if it was requested for the version still on display, so a
 * slow reply can never overwrite results for a newer design.
 */

import {
  ChannelKind,
  Design,
  InletSpec,
  cloneDesign,
  designFromJson,
  designToJson,
  emptyDesign,
  inletMonotonicityError,
  toggleChannel,
  validateDesign,
} from "./model.js";

export interface OutletValue {
  concentration: number | null;
  velocity: number;
}

export interface SimulateResponse {
  outlets: OutletValue[];
  edgeVelocities?: Record<string, number>;
  edgeProfiles?: Record<
    string,
    { valueLeft: number; valueRight: number; flatLeft: number; flatRight: number; width: number }
  >;
}

export type Selection =
  | { kind: "channel"; channel: ChannelKind; row: number; col: number }
  | { kind: "inlet"; index: number }
  | { kind: "outlet"; index: number }
  | null;

export class EditorState {
  design: Design;
  version = 0;
  dirty = false;
  selection: Selection = null;
  lastResponse: SimulateResponse | null = null;
  displayedVersion = -1;

  constructor(design?: Design) {
    this.design = design ?? emptyDesign(12, 12);
  }

  private touch(design: Design): void {
    this.design = design;
    this.version += 1;
    this.dirty = true;
  }

  toggleChannel(kind: ChannelKind, row: number, col: number): void {
    this.touch(toggleChannel(this.design, kind, row, col));
  }

  /**
   * Update one inlet; returns an explanation and leaves the design untouched
   * when the edit would break inlet monotonicity or basic bounds.
   */
  editInlet(index: number, concentration: number, velocity: number): string | null {
    const inlet = this.design.inlets[index];
    if (!inlet) return `no inlet at index ${index}`;
    if (concentration < 0 || concentration > 1) {
      return `concentration ${concentration} must lie in [0, 1]`;
    }
    if (velocity <= 0) return `velocity ${velocity} must be positive`;
    const updated = this.design.inlets.map((existing, i) =>
      i === index ? { ...existing, concentration, velocity } : existing,
    );
    const violation = inletMonotonicityError(updated);
    if (violation) return violation;
    const next = cloneDesign(this.design);
    next.inlets = updated;
    this.touch(next);
    return null;
  }

  /** Add or move an inlet; order and monotonicity are re-checked. */
  setInlet(inlet: InletSpec): string | null {
    const others = this.design.inlets.filter((i) => i.col !== inlet.col);
    const updated = [...others, inlet].sort((a, b) => a.col - b.col);
    const violation = inletMonotonicityError(updated);
    if (violation) return violation;
    const next = cloneDesign(this.design);
    next.inlets = updated;
    this.touch(next);
    return null;
  }

  removeInlet(col: number): void {
    const next = cloneDesign(this.design);
    next.inlets = next.inlets.filter((i) => i.col !== col);
    this.touch(next);
  }

  toggleOutlet(col: number): void {
    const next = cloneDesign(this.design);
    if (next.outlets.includes(col)) {
      next.outlets = next.outlets.filter((c) => c !== col);
    } else {
      next.outlets = [...next.outlets, col].sort((a, b) => a - b);
    }
    this.touch(next);
  }

  resize(rows: number, cols: number): void {
    const next = cloneDesign(this.design);
    next.rows = rows;
    next.cols = cols;
    next.horizontalChannels = next.horizontalChannels.filter(
      ([r, c]) => r <= rows && c < cols,
    );
    next.verticalChannels = next.verticalChannels.filter(([r, c]) => r < rows && c <= cols);
    next.inlets = next.inlets.filter((i) => i.col <= cols);
    next.outlets = next.outlets.filter((c) => c <= cols);
    this.touch(next);
  }

  /** Issues that must be fixed before the design may be sent to the service. */
  validationIssues(): string[] {
    return validateDesign(this.design);
  }

  /**
   * Record that a simulation request is leaving for the current design;
   * returns the version tag the response must carry to be accepted.
   */
  beginSimulation(): number {
    return this.version;
  }

  /** Apply a response unless a newer edit superseded the request. */
  applyResponse(version: number, response: SimulateResponse): boolean {
    if (version < this.version || version < this.displayedVersion) {
      return false; // stale: the design changed while the request was in flight
    }
    this.lastResponse = response;
    this.displayedVersion = version;
    this.dirty = false;
    return true;
  }

  exportJson(): string {
    return designToJson(this.design);
  }

  importJson(text: string): void {
    this.design = designFromJson(text);
    this.version += 1;
    this.dirty = true;
    this.lastResponse = null;
    this.displayedVersion = -1;
    this.selection = null;
  }
}
