/**
 * Client-side mirror of the design JSON schema, with the same validation
 * rules the service applies. Designs are immutable; edits return copies.
 */

export type ChannelKind = "h" | "v";

export interface InletSpec {
  col: number;
  concentration: number;
  velocity: number;
}

export interface Design {
  rows: number;
  cols: number;
  channelWidth: number;
  channelLength: number;
  horizontalChannels: Array<[number, number]>;
  verticalChannels: Array<[number, number]>;
  inlets: InletSpec[];
  outlets: number[];
  fluid: { diffusionCoefficient: number };
}

export const DEFAULTS = {
  channelWidth: 0.2,
  channelLength: 1.5,
  diffusionCoefficient: 1.33e-4,
};

export function emptyDesign(rows: number, cols: number): Design {
  return {
    rows,
    cols,
    channelWidth: DEFAULTS.channelWidth,
    channelLength: DEFAULTS.channelLength,
    horizontalChannels: [],
    verticalChannels: [],
    inlets: [],
    outlets: [],
    fluid: { diffusionCoefficient: DEFAULTS.diffusionCoefficient },
  };
}

export function cloneDesign(design: Design): Design {
  return {
    ...design,
    horizontalChannels: design.horizontalChannels.map((c) => [...c] as [number, number]),
    verticalChannels: design.verticalChannels.map((c) => [...c] as [number, number]),
    inlets: design.inlets.map((i) => ({ ...i })),
    outlets: [...design.outlets],
    fluid: { ...design.fluid },
  };
}

function channelList(design: Design, kind: ChannelKind): Array<[number, number]> {
  return kind === "h" ? design.horizontalChannels : design.verticalChannels;
}

export function hasChannel(design: Design, kind: ChannelKind, row: number, col: number): boolean {
  return channelList(design, kind).some(([r, c]) => r === row && c === col);
}

export function channelInRange(design: Design, kind: ChannelKind, row: number, col: number): boolean {
  if (kind === "h") {
    return row >= 0 && row <= design.rows && col >= 0 && col < design.cols;
  }
  return row >= 0 && row < design.rows && col >= 0 && col <= design.cols;
}

/** Flip one lattice edge; returns a new design with channels kept sorted. */
export function toggleChannel(design: Design, kind: ChannelKind, row: number, col: number): Design {
  if (!channelInRange(design, kind, row, col)) {
    throw new Error(`channel ${kind}:${row}:${col} out of range`);
  }
  const next = cloneDesign(design);
  const list = channelList(next, kind);
  const index = list.findIndex(([r, c]) => r === row && c === col);
  if (index >= 0) {
    list.splice(index, 1);
  } else {
    list.push([row, col]);
    list.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  }
  return next;
}

/** Inlet concentrations must be non-increasing left to right. */
export function inletMonotonicityError(inlets: InletSpec[]): string | null {
  for (let i = 1; i < inlets.length; i++) {
    if (inlets[i]!.concentration > inlets[i - 1]!.concentration) {
      return (
        `inlet at column ${inlets[i]!.col} has concentration ` +
        `${inlets[i]!.concentration} above its left neighbour's ` +
        `${inlets[i - 1]!.concentration}; concentrations must not increase left to right`
      );
    }
  }
  return null;
}

/** The validation rules a design must pass before being sent anywhere. */
export function validateDesign(design: Design): string[] {
  const issues: string[] = [];
  if (design.rows < 1 || design.cols < 1) issues.push("grid must be at least 1x1");
  if (design.channelWidth <= 0 || design.channelLength <= 0) {
    issues.push("channel width and length must be positive");
  }
  if (design.fluid.diffusionCoefficient <= 0) issues.push("diffusivity must be positive");
  for (const [r, c] of design.horizontalChannels) {
    if (!channelInRange(design, "h", r, c)) issues.push(`horizontal channel ${r},${c} out of range`);
  }
  for (const [r, c] of design.verticalChannels) {
    if (!channelInRange(design, "v", r, c)) issues.push(`vertical channel ${r},${c} out of range`);
  }
  if (design.inlets.length === 0) issues.push("at least one inlet is required");
  if (design.outlets.length === 0) issues.push("at least one outlet is required");
  for (const inlet of design.inlets) {
    if (inlet.col < 0 || inlet.col > design.cols) issues.push(`inlet column ${inlet.col} out of range`);
    if (inlet.concentration < 0 || inlet.concentration > 1) {
      issues.push(`inlet concentration ${inlet.concentration} outside [0, 1]`);
    }
    if (inlet.velocity <= 0) issues.push(`inlet velocity ${inlet.velocity} must be positive`);
    if (!hasChannel(design, "v", 0, inlet.col)) {
      issues.push(`inlet at column ${inlet.col} needs the vertical channel below it`);
    }
  }
  for (let i = 1; i < design.inlets.length; i++) {
    if (design.inlets[i]!.col <= design.inlets[i - 1]!.col) {
      issues.push("inlet columns must be strictly increasing");
      break;
    }
  }
  const monotonicity = inletMonotonicityError(design.inlets);
  if (monotonicity) issues.push(monotonicity);
  for (const col of design.outlets) {
    if (col < 0 || col > design.cols) issues.push(`outlet column ${col} out of range`);
  }
  for (let i = 1; i < design.outlets.length; i++) {
    if (design.outlets[i]! <= design.outlets[i - 1]!) {
      issues.push("outlet columns must be strictly increasing");
      break;
    }
  }
  return issues;
}

/** Export in the shared design-file schema (channels sorted, keys explicit). */
export function designToJson(design: Design): string {
  const sorted = (list: Array<[number, number]>) =>
    [...list].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  return JSON.stringify(
    {
      rows: design.rows,
      cols: design.cols,
      channelWidth: design.channelWidth,
      channelLength: design.channelLength,
      horizontalChannels: sorted(design.horizontalChannels),
      verticalChannels: sorted(design.verticalChannels),
      inlets: design.inlets.map((i) => ({
        col: i.col,
        concentration: i.concentration,
        velocity: i.velocity,
      })),
      outlets: [...design.outlets],
      fluid: { diffusionCoefficient: design.fluid.diffusionCoefficient },
    },
    null,
    2,
  );
}

export function designFromJson(text: string): Design {
  const raw = JSON.parse(text);
  if (typeof raw !== "object" || raw === null) throw new Error("design file must be a JSON object");
  const design: Design = {
    rows: requireInt(raw.rows, "rows"),
    cols: requireInt(raw.cols, "cols"),
    channelWidth: raw.channelWidth ?? DEFAULTS.channelWidth,
    channelLength: raw.channelLength ?? DEFAULTS.channelLength,
    horizontalChannels: (raw.horizontalChannels ?? []).map(pair),
    verticalChannels: (raw.verticalChannels ?? []).map(pair),
    inlets: (raw.inlets ?? []).map((i: Record<string, number>) => ({
      col: requireInt(i.col, "inlet col"),
      concentration: Number(i.concentration),
      velocity: Number(i.velocity),
    })),
    outlets: (raw.outlets ?? []).map((c: unknown) => requireInt(c, "outlet col")),
    fluid: {
      diffusionCoefficient: raw.fluid?.diffusionCoefficient ?? DEFAULTS.diffusionCoefficient,
    },
  };
  const issues = validateDesign(design);
  if (issues.length) throw new Error(`invalid design file: ${issues[0]}`);
  return design;
}

function requireInt(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isInteger(value)) {
    throw new Error(`${what} must be an integer`);
  }
  return value;
}

function pair(value: unknown): [number, number] {
  if (!Array.isArray(value) || value.length !== 2) throw new Error("channel entries must be [row, col]");
  return [requireInt(value[0], "row"), requireInt(value[1], "col")];
}
