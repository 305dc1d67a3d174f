import { BASE_HALF_WIDTH, MAX_ZOOM, TILE_SIZE } from './constants.js'

export interface Point {
    re: number
    im: number
}

// A pane viewport: centered window whose horizontal half-extent is halfWidth.
// The vertical half-extent follows from the pane's pixel aspect ratio.
export interface View {
    centerRe: number
    centerIm: number
    halfWidth: number
}

export interface PaneSize {
    width: number
    height: number
}

export interface TilePlacement {
    tx: number
    ty: number
    zoom: number
    // top-left corner and edge length in pane pixels (float; caller rounds)
    screenX: number
    screenY: number
    screenSize: number
}

export function pixelSize(view: View, pane: PaneSize): number {
    return (2 * view.halfWidth) / pane.width
}

export function halfHeight(view: View, pane: PaneSize): number {
    return (view.halfWidth * pane.height) / pane.width
}

// Center of pixel (px, py); same convention as the server rasters:
// x = x_min + (px + 0.5) * pixelSize, y = y_max - (py + 0.5) * pixelSize.
export function pixelToPoint(view: View, pane: PaneSize, px: number, py: number): Point {
    const ps = pixelSize(view, pane)
    return {
        re: view.centerRe - view.halfWidth + (px + 0.5) * ps,
        im: view.centerIm + halfHeight(view, pane) - (py + 0.5) * ps,
    }
}

export function pointToPixel(view: View, pane: PaneSize, p: Point): { x: number; y: number } {
    const ps = pixelSize(view, pane)
    return {
        x: (p.re - (view.centerRe - view.halfWidth)) / ps,
        y: (view.centerIm + halfHeight(view, pane) - p.im) / ps,
    }
}

// Smallest zoom whose tiles are at least as finely sampled as the pane.
export function zoomFor(view: View, pane: PaneSize): number {
    const paneScale = pixelSize(view, pane)
    const wanted = Math.ceil(Math.log2((2 * BASE_HALF_WIDTH) / (TILE_SIZE * paneScale)))
    return Math.max(0, Math.min(MAX_ZOOM, wanted))
}

export function tileSpan(zoom: number): number {
    return (2 * BASE_HALF_WIDTH) / Math.pow(2, zoom)
}

export function tileWindow(zoom: number, tx: number, ty: number): { xLeft: number; yTop: number; span: number } {
    const span = tileSpan(zoom)
    return { xLeft: -BASE_HALF_WIDTH + tx * span, yTop: BASE_HALF_WIDTH - ty * span, span }
}

// Tiles intersecting the view, with their blit rectangles in pane pixels.
export function tilesFor(view: View, pane: PaneSize, zoom: number): TilePlacement[] {
    const span = tileSpan(zoom)
    const count = Math.pow(2, zoom)
    const ps = pixelSize(view, pane)
    const hh = halfHeight(view, pane)
    const x0 = view.centerRe - view.halfWidth
    const x1 = view.centerRe + view.halfWidth
    const y0 = view.centerIm - hh
    const y1 = view.centerIm + hh

    const txMin = Math.max(0, Math.floor((x0 + BASE_HALF_WIDTH) / span))
    const txMax = Math.min(count - 1, Math.floor((x1 + BASE_HALF_WIDTH) / span - 1e-12))
    const tyMin = Math.max(0, Math.floor((BASE_HALF_WIDTH - y1) / span))
    const tyMax = Math.min(count - 1, Math.floor((BASE_HALF_WIDTH - y0) / span - 1e-12))

    const out: TilePlacement[] = []
    for (let ty = tyMin; ty <= tyMax; ty++) {
        for (let tx = txMin; tx <= txMax; tx++) {
            const w = tileWindow(zoom, tx, ty)
            out.push({
                tx,
                ty,
                zoom,
                screenX: (w.xLeft - x0) / ps,
                screenY: (y1 - w.yTop) / ps,
                screenSize: span / ps,
            })
        }
    }
    return out
}

export function zoomedIn(view: View): View {
    return { ...view, halfWidth: view.halfWidth / 2 }
}

export function zoomedOut(view: View): View {
    return { ...view, halfWidth: Math.min(BASE_HALF_WIDTH, view.halfWidth * 2) }
}

export function panned(view: View, pane: PaneSize, dxPx: number, dyPx: number): View {
    const ps = pixelSize(view, pane)
    return {
        ...view,
        centerRe: view.centerRe - dxPx * ps,
        centerIm: view.centerIm + dyPx * ps,
    }
}
