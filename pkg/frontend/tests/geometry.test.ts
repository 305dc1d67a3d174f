import { describe, expect, it } from 'vitest'

import {
    halfHeight,
    panned,
    pixelToPoint,
    pointToPixel,
    tilesFor,
    tileSpan,
    tileWindow,
    zoomedIn,
    zoomedOut,
    zoomFor,
    type View,
} from '../src/geometry.js'

const PANE = { width: 256, height: 256 }

describe('pixel addressing', () => {
    it('matches the tile scheme pixel centers', () => {
        // a 256px view of [0,2]x[0,2] must equal zoom-1 tile (1,0)
        const view: View = { centerRe: 1, centerIm: 1, halfWidth: 1 }
        const w = tileWindow(1, 1, 0)
        expect(w).toEqual({ xLeft: 0, yTop: 2, span: 2 })
        const ps = w.span / 256
        for (const [px, py] of [
            [0, 0],
            [255, 255],
            [128, 7],
        ] as const) {
            const p = pixelToPoint(view, PANE, px, py)
            expect(p.re).toBeCloseTo(w.xLeft + (px + 0.5) * ps, 14)
            expect(p.im).toBeCloseTo(w.yTop - (py + 0.5) * ps, 14)
        }
    })

    it('round-trips with pointToPixel', () => {
        const view: View = { centerRe: -0.3, centerIm: 0.7, halfWidth: 0.4 }
        const pane = { width: 640, height: 480 }
        const p = pixelToPoint(view, pane, 123, 45)
        const back = pointToPixel(view, pane, p)
        expect(back.x).toBeCloseTo(123.5, 10)
        expect(back.y).toBeCloseTo(45.5, 10)
    })

    it('non-square panes get a proportional half height', () => {
        const view: View = { centerRe: 0, centerIm: 0, halfWidth: 2 }
        expect(halfHeight(view, { width: 512, height: 256 })).toBe(1)
    })
})

describe('zoom selection', () => {
    it('full window on a 512 pane needs zoom 1', () => {
        expect(zoomFor({ centerRe: 0, centerIm: 0, halfWidth: 2 }, { width: 512, height: 512 })).toBe(1)
    })

    it('full window on a 256 pane is the single zoom-0 tile', () => {
        expect(zoomFor({ centerRe: 0, centerIm: 0, halfWidth: 2 }, PANE)).toBe(0)
    })

    it('halving the half width bumps zoom by one', () => {
        const pane = { width: 512, height: 512 }
        const v1: View = { centerRe: 0, centerIm: 0, halfWidth: 1 }
        expect(zoomFor(v1, pane)).toBe(2)
        expect(zoomFor(zoomedIn(v1), pane)).toBe(3)
    })

    it('never exceeds the service zoom cap', () => {
        const v: View = { centerRe: 0, centerIm: 0, halfWidth: 1e-12 }
        expect(zoomFor(v, PANE)).toBe(24)
    })
})

describe('tile coverage', () => {
    it('covers a centered unit window with four tiles', () => {
        const view: View = { centerRe: 0, centerIm: 0, halfWidth: 1 }
        const pane = { width: 512, height: 512 }
        const zoom = zoomFor(view, pane)
        expect(zoom).toBe(2)
        const tiles = tilesFor(view, pane, zoom)
        expect(tiles.map((t) => [t.tx, t.ty])).toEqual([
            [1, 1],
            [2, 1],
            [1, 2],
            [2, 2],
        ])
        const first = tiles[0]!
        expect(first.screenX).toBeCloseTo(0, 10)
        expect(first.screenY).toBeCloseTo(0, 10)
        expect(first.screenSize).toBeCloseTo(256, 10)
    })

    it('clamps to the plane square', () => {
        const view: View = { centerRe: -2, centerIm: 2, halfWidth: 1 }
        const tiles = tilesFor(view, PANE, 2)
        // only the top-left quarter of the view intersects [-2,2]^2
        expect(tiles.map((t) => [t.tx, t.ty])).toEqual([[0, 0]])
    })

    it('tile spans halve per zoom level', () => {
        expect(tileSpan(0)).toBe(4)
        expect(tileSpan(3)).toBe(0.5)
    })
})

describe('view updates', () => {
    it('zoom in halves the half width', () => {
        const v: View = { centerRe: 0.5, centerIm: -0.25, halfWidth: 0.8 }
        expect(zoomedIn(v).halfWidth).toBe(0.4)
        expect(zoomedIn(v).centerRe).toBe(0.5)
    })

    it('zoom out doubles and saturates at the full window', () => {
        const v: View = { centerRe: 0, centerIm: 0, halfWidth: 1.5 }
        expect(zoomedOut(v).halfWidth).toBe(2)
        expect(zoomedOut(zoomedOut(v)).halfWidth).toBe(2)
    })

    it('panning moves the center by whole pixels', () => {
        const v: View = { centerRe: 0, centerIm: 0, halfWidth: 2 }
        const moved = panned(v, PANE, 64, 0)
        expect(moved.centerRe).toBeCloseTo(-1, 12)
        expect(moved.centerIm).toBe(0)
    })
})
