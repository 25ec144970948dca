import { describe, expect, it } from "vitest";
import { axisAngle, levelPoint, renderRadial } from "../src/radial.js";
import type { RadialData } from "../src/types.js";

// shaped exactly like GET /cases/{id}/radial for the example case: two
// rights, round 0 blocked on art-21, round 1 after mitigation
const TWO_ROUNDS: RadialData = {
  case_id: "fria-2026-0042",
  projection: "display-only: low=0, medium=1, high=2, very-high=3",
  axes: [
    { right_id: "eu-charter:art-21", title: "Non-discrimination" },
    { right_id: "eu-charter:art-8", title: "Protection of personal data" },
  ],
  series: [
    {
      round_number: 0,
      levels: [
        {
          right_id: "eu-charter:art-21",
          level: 2,
          rank: "high",
          label: "High/M",
          acceptability: "blocked",
        },
        {
          right_id: "eu-charter:art-8",
          level: 1,
          rank: "medium",
          label: "Medium/M",
          acceptability: "acceptable",
        },
      ],
    },
    {
      round_number: 1,
      levels: [
        {
          right_id: "eu-charter:art-21",
          level: 1,
          rank: "medium",
          label: "Medium/M",
          acceptability: "acceptable",
        },
        {
          right_id: "eu-charter:art-8",
          level: 1,
          rank: "medium",
          label: "Low/M",
          acceptability: "acceptable",
        },
      ],
    },
  ],
};

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("renderRadial", () => {
  it("draws one axis per right and one outline per round", () => {
    const svg = renderRadial(TWO_ROUNDS);
    expect(count(svg, '<line class="axis"')).toBe(2);
    expect(count(svg, '<polygon class="series"')).toBe(2);
    expect(svg).toContain('data-right="eu-charter:art-21"');
    expect(svg).toContain('data-right="eu-charter:art-8"');
    expect(svg).toContain('data-round="0"');
    expect(svg).toContain('data-round="1"');
    expect(svg).toContain("Non-discrimination");
    expect(svg).toContain("Protection of personal data");
  });

  it("marks blocked rights on the round where they are blocked", () => {
    const svg = renderRadial(TWO_ROUNDS);
    const markers = svg.match(/<circle class="blocked-marker"[^>]*/g) ?? [];
    expect(markers).toHaveLength(1);
    expect(markers[0]).toContain('data-right="eu-charter:art-21"');
    expect(markers[0]).toContain('data-round="0"');
  });

  it("renders only the selected rounds", () => {
    const oneRound: RadialData = { ...TWO_ROUNDS, series: [TWO_ROUNDS.series[1]!] };
    const svg = renderRadial(oneRound);
    expect(count(svg, '<polygon class="series"')).toBe(1);
    expect(svg).toContain('data-round="1"');
    expect(svg).not.toContain('data-round="0"');
  });

  it("falls back to bars when only one axis exists", () => {
    const single: RadialData = {
      ...TWO_ROUNDS,
      axes: [TWO_ROUNDS.axes[0]!],
      series: TWO_ROUNDS.series.map((s) => ({
        round_number: s.round_number,
        levels: s.levels.filter((l) => l.right_id === "eu-charter:art-21"),
      })),
    };
    const svg = renderRadial(single);
    expect(count(svg, '<polygon class="series"')).toBe(0);
    expect(count(svg, '<rect class="series-bar"')).toBe(2);
    expect(svg).toContain("round 0: High/M (high)");
    expect(svg).toContain("blocked");
  });

  it("degrades to an empty state instead of crashing", () => {
    for (const data of [
      { ...TWO_ROUNDS, series: [] },
      { ...TWO_ROUNDS, axes: [], series: [] },
    ]) {
      const svg = renderRadial(data);
      expect(svg).toContain("no rounds computed yet");
      expect(svg).not.toContain("<polygon");
    }
  });

  it("skips axes a round has no level for", () => {
    const partial: RadialData = {
      ...TWO_ROUNDS,
      series: [
        {
          round_number: 0,
          levels: [TWO_ROUNDS.series[0]!.levels[0]!],
        },
      ],
    };
    const svg = renderRadial({ ...partial, axes: TWO_ROUNDS.axes });
    const points = svg.match(/points="([^"]*)"/)?.[1] ?? "";
    expect(points.split(" ").filter(Boolean)).toHaveLength(1);
  });

  it("escapes markup in titles", () => {
    const hostile: RadialData = {
      ...TWO_ROUNDS,
      axes: [
        { right_id: "r1", title: "<script>alert(1)</script>" },
        { right_id: "r2", title: "a & b" },
      ],
    };
    const svg = renderRadial(hostile);
    expect(svg).not.toContain("<script>");
    expect(svg).toContain("&lt;script&gt;");
    expect(svg).toContain("a &amp; b");
  });
});

describe("geometry helpers", () => {
  it("starts the first axis at twelve o'clock", () => {
    expect(axisAngle(0, 4)).toBeCloseTo(-Math.PI / 2);
  });

  it("projects the top rank onto the full radius", () => {
    const p = levelPoint(3, 0, 0, 0, 100);
    expect(p.x).toBeCloseTo(100);
    expect(p.y).toBeCloseTo(0);
  });

  it("keeps the lowest rank visibly off centre", () => {
    const p = levelPoint(0, 0, 0, 0, 100);
    expect(p.x).toBeCloseTo(25);
  });

  it("clamps levels beyond the scale to the rim", () => {
    const p = levelPoint(9, 0, 0, 0, 100);
    expect(p.x).toBeCloseTo(100);
  });
});
